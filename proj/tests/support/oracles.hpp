#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gcshi/core.hpp"

// Independent reference implementations used to cross-check the library.
// These are deliberately written as plain straight-line arithmetic with a
// wider accumulator, sharing no code with the implementations under test.

namespace testsupport {

struct TopsisOracleResult {
    std::vector<std::vector<double>> normalized;
    std::vector<std::vector<double>> weighted;
    std::vector<double> ideal_best;
    std::vector<double> ideal_worst;
    std::vector<double> dist_best;
    std::vector<double> dist_worst;
    std::vector<double> closeness;
};

inline TopsisOracleResult topsis_oracle(const std::vector<std::vector<double>>& x,
                                        const std::vector<double>& w,
                                        const std::vector<gcshi::CriterionKind>& kinds) {
    const std::size_t n = x.size();
    const std::size_t k = w.size();
    TopsisOracleResult r;
    r.normalized.assign(n, std::vector<double>(k, 0.0));
    r.weighted.assign(n, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        long double sq = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            sq += static_cast<long double>(x[i][j]) * static_cast<long double>(x[i][j]);
        }
        long double norm = sqrtl(sq);
        for (std::size_t i = 0; i < n; ++i) {
            long double v = norm == 0.0L ? 0.0L : static_cast<long double>(x[i][j]) / norm;
            r.normalized[i][j] = static_cast<double>(v);
            r.weighted[i][j] = static_cast<double>(v * static_cast<long double>(w[j]));
        }
    }
    r.ideal_best.resize(k);
    r.ideal_worst.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        double lo = r.weighted[0][j];
        double hi = r.weighted[0][j];
        for (std::size_t i = 1; i < n; ++i) {
            if (r.weighted[i][j] < lo) lo = r.weighted[i][j];
            if (r.weighted[i][j] > hi) hi = r.weighted[i][j];
        }
        bool benefit = kinds[j] == gcshi::CriterionKind::benefit;
        r.ideal_best[j] = benefit ? hi : lo;
        r.ideal_worst[j] = benefit ? lo : hi;
    }
    r.dist_best.resize(n);
    r.dist_worst.resize(n);
    r.closeness.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double db = 0.0L;
        long double dw = 0.0L;
        for (std::size_t j = 0; j < k; ++j) {
            long double a = static_cast<long double>(r.weighted[i][j]) - r.ideal_best[j];
            long double b = static_cast<long double>(r.weighted[i][j]) - r.ideal_worst[j];
            db += a * a;
            dw += b * b;
        }
        r.dist_best[i] = static_cast<double>(sqrtl(db));
        r.dist_worst[i] = static_cast<double>(sqrtl(dw));
        long double denom = static_cast<long double>(r.dist_best[i]) + r.dist_worst[i];
        r.closeness[i] = denom == 0.0L
                             ? 0.5
                             : static_cast<double>(r.dist_worst[i] / denom);
    }
    return r;
}

// Core points and the partition they induce, by brute force: a point is
// core when at least min_pts points (itself included) lie within eps, and
// core points connect when within eps of each other.
struct CoreComponents {
    std::vector<bool> is_core;
    std::vector<std::vector<std::size_t>> components;  // core indices, ascending
};

inline CoreComponents core_components(const std::vector<std::vector<double>>& points,
                                      double eps, int min_pts) {
    const std::size_t n = points.size();
    auto dist = [&](std::size_t a, std::size_t b) {
        long double sq = 0.0L;
        for (std::size_t j = 0; j < points[a].size(); ++j) {
            long double d = static_cast<long double>(points[a][j]) - points[b][j];
            sq += d * d;
        }
        return static_cast<double>(sqrtl(sq));
    };
    CoreComponents result;
    result.is_core.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        int within = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (dist(i, j) <= eps) ++within;
        }
        result.is_core[i] = within >= min_pts;
    }
    std::vector<std::size_t> component(n, static_cast<std::size_t>(-1));
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!result.is_core[i] || component[i] != static_cast<std::size_t>(-1)) continue;
        std::vector<std::size_t> stack = {i};
        component[i] = next;
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            for (std::size_t q = 0; q < n; ++q) {
                if (!result.is_core[q] || component[q] != static_cast<std::size_t>(-1)) {
                    continue;
                }
                if (dist(p, q) <= eps) {
                    component[q] = next;
                    stack.push_back(q);
                }
            }
        }
        ++next;
    }
    result.components.assign(next, {});
    for (std::size_t i = 0; i < n; ++i) {
        if (component[i] != static_cast<std::size_t>(-1)) {
            result.components[component[i]].push_back(i);
        }
    }
    return result;
}

}  // namespace testsupport
