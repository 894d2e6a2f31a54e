#pragma once

// Random forest baseline: bootstrap samples, floor(sqrt(d)) random candidate
// features per split, Gini impurity, majority vote with ties to Increase.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/random.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/models/gbdt.hpp"
#include "earnsignal/models/tree.hpp"

namespace earnsignal {

struct ForestParams {
    std::size_t n_trees = 100;
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    std::uint64_t seed = 42;

    bool operator==(const ForestParams&) const = default;
};

/// Leaf values are the fraction of Increase rows reaching the leaf.
struct ForestModel {
    std::vector<Tree> trees;
    ForestParams params;
    std::vector<std::string> feature_names;

    bool operator==(const ForestModel&) const = default;
};

namespace detail {

class GiniGain {
public:
    GiniGain(const std::vector<double>& y, const std::vector<std::size_t>& weight)
        : y_(y), w_(weight) {}

    void reset(const std::vector<std::size_t>& order) {
        n_ = 0;
        pos_ = 0;
        for (std::size_t i : order) {
            n_ += w_[i];
            pos_ += w_[i] * static_cast<std::size_t>(y_[i]);
        }
        nl_ = 0;
        pl_ = 0;
    }
    void push_left(std::size_t i) {
        nl_ += w_[i];
        pl_ += w_[i] * static_cast<std::size_t>(y_[i]);
    }
    double gain() const {
        const double n = static_cast<double>(n_);
        const double nl = static_cast<double>(nl_);
        const double nr = n - nl;
        return gini(pos_, n_) - (nl / n) * gini(pl_, nl_) - (nr / n) * gini(pos_ - pl_, n_ - nl_);
    }

    static double gini(std::size_t pos, std::size_t n) {
        if (n == 0) return 0.0;
        const double p = static_cast<double>(pos) / static_cast<double>(n);
        return 2.0 * p * (1.0 - p);
    }

private:
    const std::vector<double>& y_;
    const std::vector<std::size_t>& w_;
    std::size_t n_ = 0;
    std::size_t pos_ = 0;
    std::size_t nl_ = 0;
    std::size_t pl_ = 0;
};

struct ForestTreeBuilder {
    const Dataset& data;
    const ForestParams& params;
    const std::vector<std::size_t>& weight;  // bootstrap multiplicity
    Rng& rng;
    std::size_t mtry;
    Tree tree;

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        std::size_t n = 0;
        std::size_t pos = 0;
        for (std::size_t i : rows) {
            n += weight[i];
            pos += weight[i] * static_cast<std::size_t>(data.y[i]);
        }
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes.back().value = static_cast<double>(pos) / static_cast<double>(n);

        if (pos == 0 || pos == n) return id;
        if (n < params.min_samples_split) return id;
        if (params.max_depth && depth >= *params.max_depth) return id;

        // partial Fisher-Yates for the candidate feature subset
        std::vector<std::size_t> features(data.d);
        std::iota(features.begin(), features.end(), 0);
        for (std::size_t j = 0; j < mtry; ++j) {
            std::swap(features[j], features[j + uniform_index(rng, data.d - j)]);
        }
        features.resize(mtry);

        // rows are distinct indices; the leaf constraint is on distinct rows
        auto make_eval = [&] { return GiniGain(data.y, weight); };
        const SplitCandidate split = find_best_split(data, rows, features, params.min_samples_leaf, make_eval, 1);
        if (!split.valid()) return id;

        const std::size_t nl = partition_rows(data, rows, split);
        std::vector<std::size_t> right(rows.begin() + static_cast<std::ptrdiff_t>(nl), rows.end());
        rows.resize(nl);
        const int l = build(std::move(rows), depth + 1);
        const int r = build(std::move(right), depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }
};

}  // namespace detail

inline ForestModel train_random_forest(const FeatureTable& train, const ForestParams& params) {
    if (params.n_trees < 1) throw Error(ErrorKind::BadParams, "n_trees must be >= 1");
    if (params.min_samples_leaf < 1) throw Error(ErrorKind::BadParams, "min_samples_leaf must be >= 1");
    if (params.max_depth && *params.max_depth < 1) throw Error(ErrorKind::BadParams, "max_depth must be >= 1");
    if (train.empty()) throw Error(ErrorKind::EmptyTable, "empty training table");
    require_two_classes(train);
    const Dataset data = Dataset::from_table(train);

    ForestModel model;
    model.params = params;
    model.feature_names = train.feature_names;
    const std::size_t mtry =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(data.d)))));

    Rng rng(params.seed);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        std::vector<std::size_t> weight(data.n, 0);
        for (std::size_t i = 0; i < data.n; ++i) ++weight[uniform_index(rng, data.n)];
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < data.n; ++i) {
            if (weight[i] > 0) rows.push_back(i);
        }
        detail::ForestTreeBuilder builder{data, params, weight, rng, mtry, {}};
        builder.build(std::move(rows), 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

/// p_increase is the fraction of trees voting Increase; a tied vote is Increase.
inline Prediction rf_predict(const ForestModel& model, std::span<const double> row) {
    if (row.size() != model.feature_names.size()) {
        throw Error(ErrorKind::DimensionMismatch, "row width does not match forest features");
    }
    std::size_t votes = 0;
    for (const auto& tree : model.trees) {
        if (tree.predict(row) >= 0.5) ++votes;
    }
    Prediction p;
    p.p_increase = static_cast<double>(votes) / static_cast<double>(model.trees.size());
    p.label = 2 * votes >= model.trees.size() ? Direction::Increase : Direction::Decrease;
    return p;
}

}  // namespace earnsignal
