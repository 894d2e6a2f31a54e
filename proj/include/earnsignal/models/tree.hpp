#pragma once

// Shared binary-tree representation and split search used by the boosted and
// bagged learners.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"

namespace earnsignal {

/// Internal node when feature >= 0: rows with x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf output

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> x) const {
        int i = 0;
        while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(i)].value;
    }

    bool operator==(const Tree&) const = default;
};

/// Column-major copy of a table's features with 0/1 targets (Increase = 1).
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> columns;  // columns[f * n + i]
    std::vector<double> y;
    std::vector<std::size_t> name_rank;  // position of each feature in name order

    double at(std::size_t i, std::size_t f) const { return columns[f * n + i]; }
    std::span<const double> column(std::size_t f) const { return {columns.data() + f * n, n}; }

    std::vector<double> row(std::size_t i) const {
        std::vector<double> r(d);
        for (std::size_t f = 0; f < d; ++f) r[f] = at(i, f);
        return r;
    }

    static Dataset from_table(const FeatureTable& table) {
        validate_table(table);
        Dataset ds;
        ds.n = table.size();
        ds.d = table.width();
        ds.columns.resize(ds.n * ds.d);
        ds.y.resize(ds.n);
        for (std::size_t i = 0; i < ds.n; ++i) {
            const auto& row = table.rows[i];
            for (std::size_t f = 0; f < ds.d; ++f) ds.columns[f * ds.n + i] = row.values[f];
            ds.y[i] = as_target(row.label);
        }
        std::vector<std::size_t> by_name(ds.d);
        for (std::size_t f = 0; f < ds.d; ++f) by_name[f] = f;
        std::sort(by_name.begin(), by_name.end(),
                  [&](std::size_t a, std::size_t b) { return table.feature_names[a] < table.feature_names[b]; });
        ds.name_rank.resize(ds.d);
        for (std::size_t r = 0; r < ds.d; ++r) ds.name_rank[by_name[r]] = r;
        return ds;
    }
};

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::size_t left_count = 0;

    bool valid() const { return feature >= 0; }
};

/// Midpoint between two distinct sorted values, kept strictly below `hi`.
inline double split_midpoint(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return mid < hi ? mid : lo;
}

namespace detail {

/// Minimum impurity decrease accepted as a real split.
inline constexpr double kMinSplitGain = 1e-12;

/// Best split on one feature. `score(prefix_stats, count)` style evaluation is
/// delegated to `Eval`, which receives (sorted order, left size) and returns gain.
template <typename Eval>
SplitCandidate best_split_on_feature(const Dataset& data, std::size_t feature, std::span<const std::size_t> rows,
                                     std::size_t min_leaf, Eval& eval) {
    std::vector<std::size_t> order(rows.begin(), rows.end());
    const auto col = data.column(feature);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    eval.reset(order);
    SplitCandidate best;
    const std::size_t n = order.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        eval.push_left(order[i]);
        const std::size_t nl = i + 1;
        if (nl < min_leaf) continue;
        if (n - nl < min_leaf) break;
        const double lo = col[order[i]];
        const double hi = col[order[i + 1]];
        if (!(lo < hi)) continue;
        const double gain = eval.gain();
        if (gain > best.gain && gain > kMinSplitGain) {
            best.feature = static_cast<int>(feature);
            best.threshold = split_midpoint(lo, hi);
            best.gain = gain;
            best.left_count = nl;
        }
    }
    return best;
}

}  // namespace detail

/// Searches `features` for the split with the largest gain. Ties go to the
/// feature whose name sorts first, then the lowest threshold, whatever the
/// thread count. Ordering by name rather than column keeps the model the same
/// when columns are permuted.
template <typename EvalFactory>
SplitCandidate find_best_split(const Dataset& data, std::span<const std::size_t> rows,
                               std::span<const std::size_t> features, std::size_t min_leaf,
                               EvalFactory make_eval, std::size_t threads) {
    std::vector<SplitCandidate> per_feature(features.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        auto eval = make_eval();
        for (std::size_t j = begin; j < end; ++j) {
            per_feature[j] = detail::best_split_on_feature(data, features[j], rows, min_leaf, eval);
        }
    };
    const bool parallel = threads > 1 && features.size() > 1 && rows.size() * features.size() >= 4096;
    if (parallel) {
        const std::size_t chunks = std::min(threads, features.size());
        std::vector<std::future<void>> jobs;
        for (std::size_t c = 0; c < chunks; ++c) {
            const std::size_t b = features.size() * c / chunks;
            const std::size_t e = features.size() * (c + 1) / chunks;
            jobs.push_back(std::async(std::launch::async, work, b, e));
        }
        for (auto& j : jobs) j.get();
    } else {
        work(0, features.size());
    }
    auto rank = [&](const SplitCandidate& c) { return data.name_rank[static_cast<std::size_t>(c.feature)]; };
    SplitCandidate best;
    for (const auto& c : per_feature) {
        if (!c.valid()) continue;
        if (!best.valid() || c.gain > best.gain ||
            (c.gain == best.gain && (rank(c) < rank(best) || (c.feature == best.feature && c.threshold < best.threshold)))) {
            best = c;
        }
    }
    return best;
}

/// Partitions `rows` in place by the split, keeping relative order.
inline std::size_t partition_rows(const Dataset& data, std::vector<std::size_t>& rows, const SplitCandidate& split) {
    const auto col = data.column(static_cast<std::size_t>(split.feature));
    auto mid = std::stable_partition(rows.begin(), rows.end(),
                                     [&](std::size_t i) { return col[i] <= split.threshold; });
    return static_cast<std::size_t>(mid - rows.begin());
}

inline double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace earnsignal
