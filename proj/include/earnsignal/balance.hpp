#pragma once

// SMOTE oversampling of the minority direction class.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/random.hpp"
#include "earnsignal/core/table.hpp"

namespace earnsignal {

struct SmoteConfig {
    std::size_t k_neighbors = 5;
    double target_ratio = 1.0;  // minority / majority after augmentation
    std::uint64_t seed = 42;
};

struct SmoteResult {
    std::vector<FeatureRow> rows;  // originals first, in input order, then synthetics
    std::size_t synthetic_count = 0;
    std::size_t effective_k = 0;
    std::optional<Direction> minority;
    std::optional<std::string> warning;
};

/// Number of synthetic rows needed: ceil(ratio * majority) - minority, floored at 0.
inline std::size_t smote_synthetic_count(std::size_t majority, std::size_t minority, double ratio) {
    const double target = std::ceil(ratio * static_cast<double>(majority) - 1e-9);
    const auto want = static_cast<std::size_t>(std::max(0.0, target));
    return want > minority ? want - minority : 0;
}

namespace detail {

inline double squared_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

/// Each synthetic row is r + lambda * (n - r): r a uniformly chosen minority
/// row, n one of its k nearest minority neighbours (Euclidean, ties to the
/// lower index), lambda uniform in [0, 1). The draw sequence depends only on
/// the seed. Ties in class count make Decrease the minority.
inline SmoteResult smote(const std::vector<FeatureRow>& rows, const SmoteConfig& cfg) {
    if (cfg.k_neighbors < 1) throw Error(ErrorKind::BadParams, "k_neighbors must be >= 1");
    if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0)) {
        throw Error(ErrorKind::BadParams, "target_ratio must be in (0, 1]");
    }
    SmoteResult result;
    result.rows = rows;

    std::vector<std::size_t> inc;
    std::vector<std::size_t> dec;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        (rows[i].label == Direction::Increase ? inc : dec).push_back(i);
    }
    const bool dec_minor = dec.size() <= inc.size();
    const auto& minority = dec_minor ? dec : inc;
    const auto& majority = dec_minor ? inc : dec;
    result.minority = dec_minor ? Direction::Decrease : Direction::Increase;

    const std::size_t needed = smote_synthetic_count(majority.size(), minority.size(), cfg.target_ratio);
    if (needed == 0) return result;
    if (minority.size() < 2) {
        throw Error(ErrorKind::TooFewMinority,
                    "SMOTE needs at least 2 minority rows, have " + std::to_string(minority.size()));
    }

    std::size_t k = cfg.k_neighbors;
    if (k >= minority.size()) {
        k = minority.size() - 1;
        result.warning = "k_neighbors " + std::to_string(cfg.k_neighbors) + " >= minority count " +
                         std::to_string(minority.size()) + "; clamped to " + std::to_string(k);
    }
    result.effective_k = k;

    // exact neighbour lists, computed once
    std::vector<std::vector<std::size_t>> neighbours(minority.size());
    for (std::size_t a = 0; a < minority.size(); ++a) {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(minority.size() - 1);
        for (std::size_t b = 0; b < minority.size(); ++b) {
            if (a == b) continue;
            dist.emplace_back(detail::squared_euclidean(rows[minority[a]].values, rows[minority[b]].values), b);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        for (std::size_t j = 0; j < k; ++j) neighbours[a].push_back(dist[j].second);
    }

    Rng rng(cfg.seed);
    result.rows.reserve(rows.size() + needed);
    for (std::size_t s = 0; s < needed; ++s) {
        const std::size_t a = uniform_index(rng, minority.size());
        const std::size_t b = neighbours[a][uniform_index(rng, k)];
        const double lambda = uniform_unit(rng);
        const FeatureRow& base = rows[minority[a]];
        const FeatureRow& other = rows[minority[b]];
        FeatureRow syn;
        syn.company = base.company;
        syn.date = base.date;
        syn.label = base.label;
        syn.origin = RowOrigin::Synthetic;
        syn.row_id = base.row_id;
        syn.parent_a = base.row_id;
        syn.parent_b = other.row_id;
        syn.values.resize(base.values.size());
        for (std::size_t j = 0; j < base.values.size(); ++j) {
            syn.values[j] = base.values[j] + lambda * (other.values[j] - base.values[j]);
        }
        result.rows.push_back(std::move(syn));
    }
    result.synthetic_count = needed;
    return result;
}

}  // namespace earnsignal
