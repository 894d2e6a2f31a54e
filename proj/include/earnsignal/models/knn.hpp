#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/models/gbdt.hpp"

namespace earnsignal {

enum class DistanceKind { Euclidean, Cosine, Lorentzian };

inline std::string_view to_string(DistanceKind k) {
    switch (k) {
    case DistanceKind::Euclidean: return "euclidean";
    case DistanceKind::Cosine: return "cosine";
    case DistanceKind::Lorentzian: return "lorentzian";
    }
    return "?";
}

inline std::optional<DistanceKind> parse_distance_kind(std::string_view s) {
    if (s == "euclidean") return DistanceKind::Euclidean;
    if (s == "cosine") return DistanceKind::Cosine;
    if (s == "lorentzian") return DistanceKind::Lorentzian;
    return std::nullopt;
}

/// Euclidean: sqrt(sum (a-b)^2). Cosine: 1 - a.b / (|a||b|), clamped at 0.
/// Lorentzian: sum ln(1 + |a-b|).
template <typename T>
T distance(std::span<const T> a, std::span<const T> b, DistanceKind kind) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "distance between vectors of unequal length");
    switch (kind) {
    case DistanceKind::Euclidean: {
        T s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    }
    case DistanceKind::Cosine: {
        T dot = 0;
        T na = 0;
        T nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0 || nb == 0) throw Error(ErrorKind::ZeroVector, "cosine distance of a zero vector");
        const T sim = dot / std::sqrt(na * nb);
        return std::max(T(0), T(1) - sim);
    }
    case DistanceKind::Lorentzian: {
        T s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::log1p(std::abs(a[i] - b[i]));
        return s;
    }
    }
    return T(0);
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b, DistanceKind kind) {
    return distance<double>(std::span<const double>(a), std::span<const double>(b), kind);
}

/// Row indices of the k nearest training rows, nearest first; equal distances
/// go to the lower row index.
inline std::vector<std::size_t> knn_neighbors(const FeatureTable& train, std::span<const double> query,
                                              std::size_t k, DistanceKind kind) {
    if (train.empty()) throw Error(ErrorKind::EmptyTable, "kNN over an empty table");
    if (k == 0 || k > train.size()) {
        throw Error(ErrorKind::BadK, "k must be in [1, " + std::to_string(train.size()) + "]");
    }
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        d.emplace_back(distance<double>(train.rows[i].values, query, kind), i);
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    std::vector<std::size_t> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j] = d[j].second;
    return out;
}

/// Majority label among the k nearest; a tied vote is Increase.
inline Prediction knn_predict(const FeatureTable& train, std::span<const double> query, std::size_t k,
                              DistanceKind kind) {
    const auto nn = knn_neighbors(train, query, k, kind);
    std::size_t inc = 0;
    for (std::size_t i : nn) {
        if (train.rows[i].label == Direction::Increase) ++inc;
    }
    Prediction p;
    p.p_increase = static_cast<double>(inc) / static_cast<double>(k);
    p.label = 2 * inc >= k ? Direction::Increase : Direction::Decrease;
    return p;
}

/// A kNN "model" is its training table plus the query parameters.
struct KnnModel {
    FeatureTable train;
    std::size_t k = 5;
    DistanceKind kind = DistanceKind::Lorentzian;
};

inline Prediction knn_predict(const KnnModel& model, std::span<const double> query) {
    if (query.size() != model.train.width()) throw Error(ErrorKind::DimensionMismatch, "query width mismatch");
    return knn_predict(model.train, query, model.k, model.kind);
}

}  // namespace earnsignal
