#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/models/gbdt.hpp"

namespace earnsignal {

struct TemporalSplit {
    FeatureTable train;
    FeatureTable test;
};

/// Chronological split at floor(fraction * n) after sorting by (date, company).
/// Rows sharing the boundary date all go to train.
inline TemporalSplit temporal_split(const FeatureTable& table, double train_fraction = 0.7) {
    if (table.empty()) throw Error(ErrorKind::EmptyTable, "cannot split an empty table");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorKind::BadParams, "train fraction must be in (0, 1)");
    }
    std::vector<FeatureRow> rows = table.rows;
    sort_by_date_company(rows);
    const std::size_t n = rows.size();
    std::size_t cut = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    while (cut > 0 && cut < n && rows[cut].date == rows[cut - 1].date) ++cut;
    if (cut == 0 || cut >= n) {
        throw Error(ErrorKind::DegenerateSplit, "split leaves " + std::string(cut == 0 ? "train" : "test") + " empty");
    }
    TemporalSplit s{table.empty_like(), table.empty_like()};
    s.train.rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(cut));
    s.test.rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(cut), rows.end());
    return s;
}

struct ConfusionMatrix {
    std::size_t tp = 0;  // Increase predicted Increase
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;

    bool operator==(const ClassMetrics&) const = default;
};

struct Metrics {
    double accuracy = 0.0;
    ClassMetrics increase;
    ClassMetrics decrease;
    double macro_f1 = 0.0;
    double mse = 0.0;  // Brier: mean (p_increase - y)^2
    ConfusionMatrix confusion;

    bool operator==(const Metrics&) const = default;
};

namespace detail {

inline double ratio_or_zero(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

inline ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
    ClassMetrics m;
    m.precision = ratio_or_zero(tp, tp + fp);
    m.recall = ratio_or_zero(tp, tp + fn);
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.support = tp + fn;
    return m;
}

}  // namespace detail

/// Zero denominators give 0 for precision, recall and F1.
inline Metrics compute_metrics(const std::vector<Prediction>& predictions, const std::vector<Direction>& truth) {
    if (predictions.size() != truth.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                                   std::to_string(truth.size()) + " labels");
    }
    if (predictions.empty()) throw Error(ErrorKind::EmptyInput, "no predictions to score");
    Metrics m;
    std::vector<double> squared;
    squared.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pred_inc = predictions[i].label == Direction::Increase;
        const bool true_inc = truth[i] == Direction::Increase;
        if (pred_inc && true_inc) ++m.confusion.tp;
        else if (pred_inc) ++m.confusion.fp;
        else if (true_inc) ++m.confusion.fn;
        else ++m.confusion.tn;
        const double err = predictions[i].p_increase - as_target(truth[i]);
        squared.push_back(err * err);
    }
    // summed in sorted order so the result does not depend on row order
    std::sort(squared.begin(), squared.end());
    double se = 0.0;
    for (double v : squared) se += v;
    const auto& c = m.confusion;
    m.accuracy = detail::ratio_or_zero(c.tp + c.tn, c.total());
    m.increase = detail::class_metrics(c.tp, c.fp, c.fn);
    m.decrease = detail::class_metrics(c.tn, c.fn, c.fp);
    m.macro_f1 = (m.increase.f1 + m.decrease.f1) / 2.0;
    m.mse = se / static_cast<double>(truth.size());
    return m;
}

}  // namespace earnsignal
