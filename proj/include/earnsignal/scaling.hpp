#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"

namespace earnsignal {

/// Standardization parameters (population std). Constant columns pass through.
struct ScalerParams {
    std::vector<std::string> feature_names;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<bool> constant;

    bool operator==(const ScalerParams&) const = default;
};

/// Fits on every row of `table`; callers pass only training rows.
/// An empty `subset` means all features.
inline ScalerParams fit_scaler(const FeatureTable& table, const std::vector<std::string>& subset = {}) {
    if (table.empty()) throw Error(ErrorKind::EmptyTable, "cannot fit scaler on an empty table");
    ScalerParams params;
    params.feature_names = subset.empty() ? table.feature_names : subset;
    const double n = static_cast<double>(table.size());
    for (const auto& name : params.feature_names) {
        auto col = table.feature_index(name);
        if (!col) throw Error(ErrorKind::FeatureMismatch, "scaler feature '" + name + "' not in table");
        double sum = 0.0;
        for (const auto& row : table.rows) sum += row.values[*col];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& row : table.rows) {
            const double d = row.values[*col] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / n);
        params.mean.push_back(mean);
        params.stddev.push_back(sd);
        params.constant.push_back(!(sd > 1e-12 * std::max(1.0, std::abs(mean))));
    }
    return params;
}

inline double scale_value(const ScalerParams& params, std::size_t i, double x) {
    if (params.constant[i]) return x;
    return (x - params.mean[i]) / params.stddev[i];
}

inline FeatureTable apply_scaler(const ScalerParams& params, FeatureTable table) {
    std::vector<std::size_t> cols;
    for (const auto& name : params.feature_names) {
        auto col = table.feature_index(name);
        if (!col) throw Error(ErrorKind::FeatureMismatch, "scaler feature '" + name + "' not in table");
        cols.push_back(*col);
    }
    for (auto& row : table.rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) row.values[cols[i]] = scale_value(params, i, row.values[cols[i]]);
    }
    return table;
}

}  // namespace earnsignal
