#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "gcshi/ahp.hpp"
#include "gcshi/cluster.hpp"
#include "gcshi/core.hpp"

namespace gcshi {

struct RankEntry {
    std::string code;
    int rank = 0;  // competition ranking: tied entries share the smaller rank
    bool tied = false;

    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

struct Ideals {
    std::vector<double> best;
    std::vector<double> worst;
};

struct TopsisResult {
    std::vector<std::string> alternatives;
    std::vector<std::string> criteria;
    std::vector<std::vector<double>> normalized;
    std::vector<std::vector<double>> weighted;
    std::vector<double> ideal_best;
    std::vector<double> ideal_worst;
    std::vector<double> dist_best;
    std::vector<double> dist_worst;
    std::vector<double> closeness;
    std::vector<RankEntry> ranking;  // display order: rank, then input order
    std::vector<std::string> warnings;
};

/// Column-wise vector normalization: each entry is divided by the Euclidean
/// norm of its column. An all-zero column normalizes to zeros and emits a
/// warning instead of dividing by zero.
inline std::vector<std::vector<double>> normalize(const DecisionMatrix& m,
                                                  std::vector<std::string>* warnings = nullptr) {
    require_valid(validate_decision_matrix(m), "decision matrix");
    const std::size_t rows = m.row_count();
    const std::size_t cols = m.column_count();
    std::vector<double> norms(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rows; ++i) sum += m.values[i][j] * m.values[i][j];
        norms[j] = std::sqrt(sum);
    }
    std::vector<std::vector<double>> r(rows, std::vector<double>(cols, 0.0));
    for (std::size_t j = 0; j < cols; ++j) {
        if (norms[j] == 0.0) {
            if (warnings) {
                warnings->push_back("column " + m.columns[j] +
                                    " is all zeros; normalized values set to 0");
            }
            continue;
        }
        for (std::size_t i = 0; i < rows; ++i) r[i][j] = m.values[i][j] / norms[j];
    }
    return r;
}

inline std::vector<std::vector<double>> apply_weights(
    const std::vector<std::vector<double>>& normalized, const std::vector<double>& weights) {
    std::vector<std::vector<double>> t(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        if (normalized[i].size() != weights.size()) {
            throw ValidationError("apply_weights: row " + std::to_string(i) + " has " +
                                  std::to_string(normalized[i].size()) + " entries, expected " +
                                  std::to_string(weights.size()));
        }
        t[i].resize(weights.size());
        for (std::size_t j = 0; j < weights.size(); ++j) {
            t[i][j] = normalized[i][j] * weights[j];
        }
    }
    return t;
}

/// Per-criterion extremes of the weighted matrix: for benefit criteria best
/// is the column maximum and worst the minimum; cost criteria swap the two.
inline Ideals ideal_solutions(const std::vector<std::vector<double>>& weighted,
                              const std::vector<CriterionKind>& kinds) {
    if (weighted.empty()) throw ValidationError("ideal_solutions: empty matrix");
    const std::size_t cols = kinds.size();
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        if (weighted[i].size() != cols) {
            throw ValidationError("ideal_solutions: row " + std::to_string(i) +
                                  " does not match criterion count");
        }
    }
    Ideals ideals;
    ideals.best.resize(cols);
    ideals.worst.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double lo = weighted[0][j];
        double hi = weighted[0][j];
        for (std::size_t i = 1; i < weighted.size(); ++i) {
            lo = std::min(lo, weighted[i][j]);
            hi = std::max(hi, weighted[i][j]);
        }
        if (kinds[j] == CriterionKind::benefit) {
            ideals.best[j] = hi;
            ideals.worst[j] = lo;
        } else {
            ideals.best[j] = lo;
            ideals.worst[j] = hi;
        }
    }
    return ideals;
}

/// Euclidean separation of one weighted row from an ideal point.
inline double separation(const std::vector<double>& row, const std::vector<double>& ideal) {
    return distance(row, ideal);
}

/// Relative closeness d_worst / (d_worst + d_best). When both separations
/// are zero the value is defined as 0.5 and a warning records the row.
inline std::vector<double> closeness(const std::vector<double>& dist_best,
                                     const std::vector<double>& dist_worst,
                                     const std::vector<std::string>& codes,
                                     std::vector<std::string>* warnings = nullptr) {
    if (dist_best.size() != dist_worst.size()) {
        throw ValidationError("closeness: separation vectors differ in length");
    }
    std::vector<double> s(dist_best.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double denom = dist_best[i] + dist_worst[i];
        if (denom == 0.0) {
            s[i] = 0.5;
            if (warnings) {
                std::string code = i < codes.size() ? codes[i] : ("#" + std::to_string(i));
                warnings->push_back("alternative " + code +
                                    " is equidistant (zero) from both ideals; closeness set "
                                    "to 0.5");
            }
        } else {
            s[i] = dist_worst[i] / denom;
        }
    }
    return s;
}

/// Competition ranking by descending closeness. Equal closeness shares the
/// same rank (the next rank is skipped) and both entries are flagged tied;
/// display order among ties follows input order.
inline std::vector<RankEntry> rank(const std::vector<std::string>& codes,
                                   const std::vector<double>& closeness) {
    if (codes.size() != closeness.size()) {
        throw ValidationError("rank: code and closeness counts differ");
    }
    std::vector<std::size_t> order(codes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return closeness[a] > closeness[b];
    });
    std::vector<RankEntry> entries;
    entries.reserve(codes.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        std::size_t idx = order[pos];
        RankEntry e;
        e.code = codes[idx];
        int strictly_better = 0;
        for (double other : closeness) {
            if (other > closeness[idx]) ++strictly_better;
        }
        e.rank = strictly_better + 1;
        int equal = 0;
        for (double other : closeness) {
            if (other == closeness[idx]) ++equal;
        }
        e.tied = equal > 1;
        entries.push_back(std::move(e));
    }
    return entries;
}

/// Full chain: normalize, weight, locate ideals, measure separations, score
/// and rank. `kinds` defaults to all-benefit when empty. The weight vector
/// must align with the matrix columns when its criterion ids are present.
inline TopsisResult evaluate(const DecisionMatrix& m, const WeightVector& w,
                             std::vector<CriterionKind> kinds = {}) {
    require_valid(validate_decision_matrix(m), "decision matrix");
    require_valid(validate_weights(w), "weight vector");
    if (w.weights.size() != m.column_count()) {
        throw ValidationError("weight vector has " + std::to_string(w.weights.size()) +
                              " entries but the decision matrix has " +
                              std::to_string(m.column_count()) + " criteria");
    }
    if (!w.criteria.empty() && w.criteria != m.columns) {
        throw ValidationError("weight vector criteria do not match decision matrix columns");
    }
    if (kinds.empty()) {
        kinds.assign(m.column_count(), CriterionKind::benefit);
    } else if (kinds.size() != m.column_count()) {
        throw ValidationError("criterion kind list does not match decision matrix columns");
    }

    TopsisResult result;
    result.alternatives = m.rows;
    result.criteria = m.columns;
    result.normalized = normalize(m, &result.warnings);
    result.weighted = apply_weights(result.normalized, w.weights);
    Ideals ideals = ideal_solutions(result.weighted, kinds);
    result.ideal_best = std::move(ideals.best);
    result.ideal_worst = std::move(ideals.worst);
    result.dist_best.resize(m.row_count());
    result.dist_worst.resize(m.row_count());
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        result.dist_best[i] = separation(result.weighted[i], result.ideal_best);
        result.dist_worst[i] = separation(result.weighted[i], result.ideal_worst);
    }
    result.closeness = closeness(result.dist_best, result.dist_worst, m.rows, &result.warnings);
    result.ranking = rank(m.rows, result.closeness);
    return result;
}

}  // namespace gcshi
