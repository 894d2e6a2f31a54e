#pragma once

// PCA via eigendecomposition of the (population) covariance matrix, using a
// cyclic Jacobi eigensolver. Feature counts here are small (tens), where
// Jacobi is accurate to machine precision and simple to verify.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "earnsignal/core/error.hpp"
#include "earnsignal/core/table.hpp"

namespace earnsignal {

using DenseMatrix = std::vector<std::vector<double>>;

struct SymmetricEigen {
    std::vector<double> values;   // descending
    DenseMatrix vectors;          // vectors[i] is the unit eigenvector for values[i]
};

/// Eigen-decomposition of a symmetric matrix (cyclic Jacobi rotations).
inline SymmetricEigen symmetric_eigen(DenseMatrix a, int max_sweeps = 100) {
    const std::size_t n = a.size();
    DenseMatrix v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            diag += a[p][p] * a[p][p];
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off <= 1e-30 * std::max(diag, 1e-300)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
    SymmetricEigen out;
    for (std::size_t idx : order) {
        out.values.push_back(a[idx][idx]);
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = v[k][idx];
        out.vectors.push_back(std::move(col));
    }
    return out;
}

/// Component count, or the smallest count whose explained variance reaches a fraction.
struct PcaTarget {
    enum class Mode { Count, Variance } mode = Mode::Count;
    std::size_t count = 0;
    double variance = 1.0;

    static PcaTarget components(std::size_t k) { return {Mode::Count, k, 1.0}; }
    static PcaTarget variance_fraction(double f) { return {Mode::Variance, 0, f}; }
};

struct PcaModel {
    std::vector<std::string> input_names;
    std::vector<double> mean;                       // centering vector
    DenseMatrix components;                          // k x d, orthonormal rows
    std::vector<double> explained_variance_ratio;    // per kept component, non-increasing
    std::vector<double> eigenvalues;                 // per kept component

    std::size_t k() const { return components.size(); }
};

inline DenseMatrix covariance_matrix(const FeatureTable& table, const std::vector<double>& mean) {
    const std::size_t d = table.width();
    DenseMatrix cov(d, std::vector<double>(d, 0.0));
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < d; ++i) {
            const double xi = row.values[i] - mean[i];
            for (std::size_t j = i; j < d; ++j) cov[i][j] += xi * (row.values[j] - mean[j]);
        }
    }
    const double n = static_cast<double>(table.size());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov[i][j] /= n;
            cov[j][i] = cov[i][j];
        }
    }
    return cov;
}

/// Components in descending eigenvalue order; each flipped so its
/// largest-magnitude entry is positive.
inline PcaModel fit_pca(const FeatureTable& table, PcaTarget target) {
    if (table.empty() || table.width() == 0) throw Error(ErrorKind::EmptyTable, "cannot fit PCA on an empty table");
    const std::size_t d = table.width();
    if (target.mode == PcaTarget::Mode::Count && (target.count == 0 || target.count > d)) {
        throw Error(ErrorKind::BadK, "component count must be in [1, " + std::to_string(d) + "]");
    }
    if (target.mode == PcaTarget::Mode::Variance && !(target.variance > 0.0 && target.variance <= 1.0)) {
        throw Error(ErrorKind::BadK, "variance target must be in (0, 1]");
    }

    PcaModel model;
    model.input_names = table.feature_names;
    model.mean.assign(d, 0.0);
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < d; ++i) model.mean[i] += row.values[i];
    }
    for (auto& m : model.mean) m /= static_cast<double>(table.size());

    SymmetricEigen eig = symmetric_eigen(covariance_matrix(table, model.mean));
    for (auto& v : eig.values) v = std::max(v, 0.0);
    const double trace = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);

    std::size_t k = target.count;
    if (target.mode == PcaTarget::Mode::Variance) {
        k = d;
        double cum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            cum += trace > 0.0 ? eig.values[i] / trace : 0.0;
            if (cum >= target.variance - 1e-12) {
                k = i + 1;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        auto vec = eig.vectors[i];
        std::size_t big = 0;
        for (std::size_t j = 1; j < d; ++j) {
            if (std::abs(vec[j]) > std::abs(vec[big])) big = j;
        }
        if (vec[big] < 0) {
            for (auto& x : vec) x = -x;
        }
        model.components.push_back(std::move(vec));
        model.eigenvalues.push_back(eig.values[i]);
        model.explained_variance_ratio.push_back(trace > 0.0 ? eig.values[i] / trace : 0.0);
    }
    return model;
}

inline std::vector<double> pca_project(const PcaModel& model, const std::vector<double>& x) {
    if (x.size() != model.mean.size()) throw Error(ErrorKind::DimensionMismatch, "PCA input width mismatch");
    std::vector<double> out(model.k(), 0.0);
    for (std::size_t c = 0; c < model.k(); ++c) {
        for (std::size_t j = 0; j < x.size(); ++j) out[c] += model.components[c][j] * (x[j] - model.mean[j]);
    }
    return out;
}

inline std::vector<double> pca_reconstruct(const PcaModel& model, const std::vector<double>& z) {
    if (z.size() != model.k()) throw Error(ErrorKind::DimensionMismatch, "PCA projection width mismatch");
    std::vector<double> x = model.mean;
    for (std::size_t c = 0; c < model.k(); ++c) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += z[c] * model.components[c][j];
    }
    return x;
}

/// Replaces the feature vector of every row by its projection (`pc1..pck`).
inline FeatureTable apply_pca(const PcaModel& model, FeatureTable table) {
    if (table.feature_names != model.input_names) {
        throw Error(ErrorKind::FeatureMismatch, "table features differ from the PCA input features");
    }
    table.feature_names.clear();
    for (std::size_t c = 0; c < model.k(); ++c) table.feature_names.push_back("pc" + std::to_string(c + 1));
    for (auto& row : table.rows) row.values = pca_project(model, row.values);
    return table;
}

}  // namespace earnsignal
