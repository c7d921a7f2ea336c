#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gcshi/core.hpp"

namespace gcshi {

/// Square reciprocal comparison matrix. a[i][j] holds how strongly
/// criterion i is preferred over criterion j on the 1..9 judgement scale
/// (fractions for the inverse direction).
struct PairwiseMatrix {
    std::vector<std::string> criteria;
    std::vector<std::vector<double>> values;

    std::size_t size() const { return criteria.size(); }

    friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;
};

struct WeightVector {
    std::vector<std::string> criteria;
    std::vector<double> weights;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

struct ConsistencyReport {
    double lambda_max = 0.0;
    double consistency_index = 0.0;
    double consistency_ratio = 0.0;
    bool acceptable = false;
};

struct AhpResult {
    WeightVector weights;                        // principal eigenvector, sums to 1
    std::vector<double> geometric_mean_weights;  // row geometric means, cross-check
    ConsistencyReport consistency;
    int iterations = 0;
};

/// Random-index table for reciprocal matrices of order 1..10; CR divides
/// the consistency index by the entry for the matrix order.
inline const std::vector<double>& saaty_random_index() {
    static const std::vector<double> table = {0.0, 0.0, 0.58, 0.90, 1.12,
                                              1.24, 1.32, 1.41, 1.45, 1.49};
    return table;
}

inline ValidationReport validate_pairwise(const PairwiseMatrix& m,
                                          std::size_t max_order = 10) {
    ValidationReport report;
    const std::size_t n = m.criteria.size();
    if (n < 2) {
        report.push_back({"", "", "comparison matrix needs at least 2 criteria"});
    }
    if (n > max_order) {
        report.push_back({"", "", "comparison matrix order " + std::to_string(n) +
                                      " exceeds the random-index table (max " +
                                      std::to_string(max_order) + ")"});
    }
    if (m.values.size() != n) {
        report.push_back({"", "", "comparison matrix is not square"});
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m.values[i].size() != n) {
            report.push_back({m.criteria[i], "", "comparison matrix row is not length " +
                                                     std::to_string(n)});
            return report;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m.criteria[i] == m.criteria[j]) {
                report.push_back({m.criteria[i], "", "duplicate criterion id"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = m.values[i][j];
            if (!(v > 0.0) || !std::isfinite(v)) {
                report.push_back({m.criteria[i], m.criteria[j],
                                  "comparison entries must be finite and > 0"});
            }
        }
    }
    if (!report.empty()) return report;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(m.values[i][i] - 1.0) > 1e-9) {
            report.push_back({m.criteria[i], m.criteria[i], "diagonal entry must be 1"});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(m.values[i][j] * m.values[j][i] - 1.0) > 1e-9) {
                report.push_back({m.criteria[i], m.criteria[j],
                                  "entry is not the reciprocal of its mirror"});
            }
        }
    }
    return report;
}

/// User-supplied weight vectors may contain zeros (a zeroed criterion drops
/// out of the ranking); negatives, non-finite values, and all-zero vectors
/// are rejected.
inline ValidationReport validate_weights(const WeightVector& w) {
    ValidationReport report;
    if (w.weights.empty()) {
        report.push_back({"", "", "weight vector is empty"});
        return report;
    }
    // An empty criteria list means the vector is unlabeled; labels are only
    // checked when present.
    if (!w.criteria.empty() && w.criteria.size() != w.weights.size()) {
        report.push_back({"", "", "weight count does not match criterion count"});
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        double v = w.weights[i];
        std::string id = i < w.criteria.size() ? w.criteria[i] : ("#" + std::to_string(i));
        if (!std::isfinite(v)) {
            report.push_back({"", id, "weight must be finite"});
        } else if (v < 0.0) {
            report.push_back({"", id, "weight must be >= 0"});
        }
        sum += v;
    }
    if (report.empty() && !(sum > 0.0)) {
        report.push_back({"", "", "weights must not all be zero"});
    }
    return report;
}

/// CR from a known principal eigenvalue. CR is defined as 0 where the
/// random index is 0 (orders 1 and 2, which are always consistent).
inline ConsistencyReport consistency_ratio(double lambda_max, std::size_t n,
                                           const std::vector<double>& ri_table =
                                               saaty_random_index()) {
    if (n < 1) throw ValidationError("consistency_ratio: order must be >= 1");
    if (n > ri_table.size()) {
        throw ValidationError("consistency_ratio: order " + std::to_string(n) +
                              " exceeds the random-index table (max " +
                              std::to_string(ri_table.size()) + ")");
    }
    ConsistencyReport r;
    r.lambda_max = lambda_max;
    r.consistency_index = n >= 2 ? (lambda_max - static_cast<double>(n)) /
                                       (static_cast<double>(n) - 1.0)
                                 : 0.0;
    double ri = ri_table[n - 1];
    r.consistency_ratio = ri > 0.0 ? r.consistency_index / ri : 0.0;
    r.acceptable = r.consistency_ratio <= 0.10;
    return r;
}

struct AhpOptions {
    double tolerance = 1e-10;  // max abs change of any normalized weight
    int max_iterations = 10000;
    std::vector<double> ri_table = saaty_random_index();
};

/// Principal eigenvector by power iteration on the comparison matrix,
/// normalized to sum 1. lambda_max is recovered as the sum of A*w for the
/// normalized w. Throws NumericalError if the iteration budget runs out.
inline AhpResult derive_weights(const PairwiseMatrix& m, const AhpOptions& options = {}) {
    require_valid(validate_pairwise(m, options.ri_table.size()), "comparison matrix");
    const std::size_t n = m.size();

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    double lambda = static_cast<double>(n);
    int iterations = 0;
    bool converged = false;
    while (iterations < options.max_iterations) {
        ++iterations;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += m.values[i][j] * w[j];
            next[i] = acc;
            sum += acc;
        }
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            throw NumericalError("power iteration produced a non-finite weight vector");
        }
        lambda = sum;  // sum of A*w with sum(w) == 1
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= sum;
            delta = std::max(delta, std::abs(next[i] - w[i]));
        }
        w.swap(next);
        if (delta <= options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NumericalError("power iteration did not converge within " +
                             std::to_string(options.max_iterations) + " iterations");
    }

    AhpResult result;
    result.weights.criteria = m.criteria;
    result.weights.weights = w;
    result.iterations = iterations;
    result.consistency = consistency_ratio(lambda, n, options.ri_table);

    result.geometric_mean_weights.resize(n);
    double gm_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double log_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) log_sum += std::log(m.values[i][j]);
        result.geometric_mean_weights[i] = std::exp(log_sum / static_cast<double>(n));
        gm_sum += result.geometric_mean_weights[i];
    }
    for (double& v : result.geometric_mean_weights) v /= gm_sum;
    return result;
}

/// Candidate judgement matrix over E1..E3 whose derived weights reproduce
/// the published (0.11, 0.63, 0.26) prioritization weights to 2 decimals.
inline const PairwiseMatrix& bundled_candidate_pairwise() {
    static const PairwiseMatrix m = {
        {"E1", "E2", "E3"},
        {{1.0, 1.0 / 5.0, 1.0 / 3.0},
         {5.0, 1.0, 3.0},
         {3.0, 1.0 / 3.0, 1.0}},
    };
    return m;
}

}  // namespace gcshi
