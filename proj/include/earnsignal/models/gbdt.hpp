#pragma once

// Binary logistic gradient boosting with exact greedy regression trees.
//
// Each round fits a tree to the residuals y - sigmoid(F) using variance
// reduction; each leaf then takes the Newton step
//     learning_rate * sum(r) / (sum(p * (1 - p)) + 1e-12)
// over its rows. The learning rate is baked into the stored leaf values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/models/tree.hpp"

namespace earnsignal {

struct GbdtParams {
    std::size_t n_estimators = 50;
    std::optional<std::size_t> max_depth;  // nullopt: limited only by the sample-count rules
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 2;
    double learning_rate = 0.1;
    std::uint64_t seed = 42;  // exact greedy training draws nothing; kept for run metadata
    std::size_t threads = 1;  // split search only; never changes the result

    bool operator==(const GbdtParams&) const = default;
};

struct GbdtModel {
    double base_score = 0.0;  // log-odds of Increase
    std::vector<Tree> trees;
    GbdtParams params;
    std::vector<std::string> feature_names;
    std::vector<double> feature_gains;  // accumulated split gain per feature

    bool operator==(const GbdtModel&) const = default;
};

struct Prediction {
    double p_increase = 0.5;
    Direction label = Direction::Increase;
};

inline constexpr double kHessianEpsilon = 1e-12;

inline void validate_gbdt_params(const GbdtParams& p) {
    if (p.n_estimators < 1) throw Error(ErrorKind::BadParams, "n_estimators must be >= 1");
    if (p.min_samples_leaf < 1) throw Error(ErrorKind::BadParams, "min_samples_leaf must be >= 1");
    if (p.min_samples_split < 2) throw Error(ErrorKind::BadParams, "min_samples_split must be >= 2");
    if (!(p.learning_rate > 0.0) || !std::isfinite(p.learning_rate)) {
        throw Error(ErrorKind::BadParams, "learning_rate must be positive");
    }
    if (p.max_depth && *p.max_depth < 1) throw Error(ErrorKind::BadParams, "max_depth must be >= 1");
}

/// Throws EmptyTable / SingleClass unless the table has >= 2 rows of both classes combined.
inline void require_two_classes(const FeatureTable& table) {
    if (table.size() < 2) throw Error(ErrorKind::EmptyTable, "need at least 2 training rows");
    bool inc = false;
    bool dec = false;
    for (const auto& r : table.rows) (r.label == Direction::Increase ? inc : dec) = true;
    if (!inc || !dec) throw Error(ErrorKind::SingleClass, "training labels contain a single class");
}

namespace detail {

class ResidualVariance {
public:
    ResidualVariance(const std::vector<double>& residual, double total) : r_(residual), total_(total) {}

    void reset(const std::vector<std::size_t>& order) {
        n_ = order.size();
        left_ = 0.0;
        nl_ = 0;
    }
    void push_left(std::size_t i) {
        left_ += r_[i];
        ++nl_;
    }
    double gain() const {
        const double right = total_ - left_;
        const double nr = static_cast<double>(n_ - nl_);
        const double nl = static_cast<double>(nl_);
        return left_ * left_ / nl + right * right / nr - total_ * total_ / static_cast<double>(n_);
    }

private:
    const std::vector<double>& r_;
    double total_;
    std::size_t n_ = 0;
    double left_ = 0.0;
    std::size_t nl_ = 0;
};

struct GbdtTreeBuilder {
    const Dataset& data;
    const GbdtParams& params;
    const std::vector<double>& residual;
    const std::vector<double>& hessian;
    std::vector<double>& gains;
    std::vector<std::size_t> all_features;
    Tree tree;

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        double rsum = 0.0;
        double hsum = 0.0;
        for (std::size_t i : rows) {
            rsum += residual[i];
            hsum += hessian[i];
        }
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes.back().value = params.learning_rate * rsum / (hsum + kHessianEpsilon);

        if (rows.size() < params.min_samples_split) return id;
        if (params.max_depth && depth >= *params.max_depth) return id;

        auto make_eval = [&] { return ResidualVariance(residual, rsum); };
        const SplitCandidate split =
            find_best_split(data, rows, all_features, params.min_samples_leaf, make_eval, params.threads);
        if (!split.valid()) return id;

        const std::size_t nl = partition_rows(data, rows, split);
        std::vector<std::size_t> right(rows.begin() + static_cast<std::ptrdiff_t>(nl), rows.end());
        rows.resize(nl);
        gains[static_cast<std::size_t>(split.feature)] += split.gain;

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

/// Raw additive score using at most `tree_limit` trees.
inline double gbdt_decision(const GbdtModel& model, std::span<const double> row,
                            std::size_t tree_limit = static_cast<std::size_t>(-1)) {
    double f = model.base_score;
    const std::size_t n = std::min(tree_limit, model.trees.size());
    for (std::size_t t = 0; t < n; ++t) f += model.trees[t].predict(row);
    return f;
}

inline Prediction gbdt_predict(const GbdtModel& model, std::span<const double> row) {
    if (row.size() != model.feature_names.size()) {
        throw Error(ErrorKind::DimensionMismatch, "row has " + std::to_string(row.size()) + " values, model expects " +
                                                      std::to_string(model.feature_names.size()));
    }
    Prediction p;
    p.p_increase = sigmoid(gbdt_decision(model, row));
    p.label = p.p_increase >= 0.5 ? Direction::Increase : Direction::Decrease;
    return p;
}

inline GbdtModel train_gbdt(const FeatureTable& train, const GbdtParams& params) {
    validate_gbdt_params(params);
    if (train.empty()) throw Error(ErrorKind::EmptyTable, "empty training table");
    require_two_classes(train);
    const Dataset data = Dataset::from_table(train);

    GbdtModel model;
    model.params = params;
    model.feature_names = train.feature_names;
    model.feature_gains.assign(data.d, 0.0);

    const double prior = std::accumulate(data.y.begin(), data.y.end(), 0.0) / static_cast<double>(data.n);
    model.base_score = std::log(prior / (1.0 - prior));

    std::vector<double> score(data.n, model.base_score);
    std::vector<double> residual(data.n);
    std::vector<double> hessian(data.n);
    std::vector<std::size_t> features(data.d);
    std::iota(features.begin(), features.end(), 0);
    std::vector<std::size_t> all_rows(data.n);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    for (std::size_t round = 0; round < params.n_estimators; ++round) {
        for (std::size_t i = 0; i < data.n; ++i) {
            const double p = sigmoid(score[i]);
            residual[i] = data.y[i] - p;
            hessian[i] = p * (1.0 - p);
        }
        detail::GbdtTreeBuilder builder{data, params, residual, hessian, model.feature_gains, features, {}};
        builder.build(all_rows, 0);
        for (std::size_t i = 0; i < data.n; ++i) {
            const auto x = data.row(i);
            score[i] += builder.tree.predict(x);
        }
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

/// Mean logistic loss of the first `tree_limit` trees on a table.
inline double gbdt_log_loss(const GbdtModel& model, const FeatureTable& table,
                            std::size_t tree_limit = static_cast<std::size_t>(-1)) {
    double loss = 0.0;
    for (const auto& row : table.rows) {
        const double f = gbdt_decision(model, row.values, tree_limit);
        const double y = as_target(row.label);
        // log(1 + e^f) - y f, computed stably
        const double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
        loss += softplus - y * f;
    }
    return loss / static_cast<double>(table.size());
}

/// Gains normalized to sum to 1 (all zero stays zero), descending, ties by name.
inline std::vector<std::pair<std::string, double>> feature_importance(const GbdtModel& model) {
    double total = 0.0;
    for (double g : model.feature_gains) total += g;
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
        const double g = f < model.feature_gains.size() ? model.feature_gains[f] : 0.0;
        out.emplace_back(model.feature_names[f], total > 0.0 ? g / total : 0.0);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace earnsignal
