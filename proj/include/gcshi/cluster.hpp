#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "gcshi/core.hpp"

namespace gcshi {

struct DbscanParams {
    double epsilon = 0.5;
    int min_pts = 2;

    friend bool operator==(const DbscanParams&, const DbscanParams&) = default;
};

/// Instrumentation for the density scan. A full run issues exactly one
/// neighborhood query per point and each query evaluates the distance to
/// every point (itself included), so distance_evaluations == n * n.
struct DbscanStats {
    std::size_t distance_evaluations = 0;
    std::size_t neighborhood_queries = 0;
};

/// Clusters hold member row indices in ascending order; codes are assigned
/// by discovery order when scanning rows top to bottom.
struct ClusterAssignment {
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<std::size_t> noise;
    DbscanParams params;
};

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ValidationError("distance: dimension mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

/// Indices of all points within epsilon of points[center], center included,
/// in ascending index order.
inline std::vector<std::size_t> epsilon_neighborhood(const std::vector<std::vector<double>>& points,
                                                     std::size_t center, double epsilon,
                                                     DbscanStats* stats = nullptr) {
    if (center >= points.size()) {
        throw ValidationError("epsilon_neighborhood: center index " + std::to_string(center) +
                              " out of range");
    }
    if (epsilon < 0.0) {
        throw ValidationError("epsilon_neighborhood: epsilon must be >= 0");
    }
    std::vector<std::size_t> result;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d = distance(points[center], points[i]);
        if (stats) ++stats->distance_evaluations;
        if (d <= epsilon) result.push_back(i);
    }
    if (stats) ++stats->neighborhood_queries;
    return result;
}

/// Density scan over the point set. A point is core iff its neighborhood
/// (self included) has at least min_pts members. Border points join the
/// first cluster whose expansion reaches them; seed expansion is FIFO.
inline ClusterAssignment dbscan(const std::vector<std::vector<double>>& points,
                                const DbscanParams& params, DbscanStats* stats = nullptr) {
    if (params.epsilon < 0.0) {
        throw ValidationError("dbscan: epsilon must be >= 0");
    }
    if (params.min_pts < 1) {
        throw ValidationError("dbscan: min_pts must be >= 1");
    }
    const std::size_t n = points.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (points[i].size() != points[0].size()) {
            throw ValidationError("dbscan: point " + std::to_string(i) +
                                  " has dimension " + std::to_string(points[i].size()) +
                                  ", expected " + std::to_string(points[0].size()));
        }
    }

    constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> cluster_of(n, kUnassigned);
    std::vector<bool> visited(n, false);   // set when the point's one query runs
    std::vector<bool> is_noise(n, false);  // tentative until a cluster reaches it

    ClusterAssignment result;
    result.params = params;

    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i]) continue;
        visited[i] = true;
        std::vector<std::size_t> seeds =
            epsilon_neighborhood(points, i, params.epsilon, stats);
        if (seeds.size() < static_cast<std::size_t>(params.min_pts)) {
            is_noise[i] = true;
            continue;
        }
        const std::size_t cluster_id = result.clusters.size();
        result.clusters.emplace_back();
        cluster_of[i] = cluster_id;
        std::deque<std::size_t> queue(seeds.begin(), seeds.end());
        while (!queue.empty()) {
            std::size_t q = queue.front();
            queue.pop_front();
            if (is_noise[q]) {
                // Already queried and found non-core; promote to border.
                is_noise[q] = false;
                cluster_of[q] = cluster_id;
                continue;
            }
            if (cluster_of[q] != kUnassigned) continue;
            cluster_of[q] = cluster_id;
            if (!visited[q]) {
                visited[q] = true;
                std::vector<std::size_t> reach =
                    epsilon_neighborhood(points, q, params.epsilon, stats);
                if (reach.size() >= static_cast<std::size_t>(params.min_pts)) {
                    queue.insert(queue.end(), reach.begin(), reach.end());
                }
            }
        }
    }

    // Membership lists in row order.
    for (std::size_t i = 0; i < n; ++i) {
        if (cluster_of[i] != kUnassigned) {
            result.clusters[cluster_of[i]].push_back(i);
        } else {
            result.noise.push_back(i);
        }
    }
    return result;
}

inline std::vector<std::vector<double>> to_points(const RatingMatrix& m) {
    std::vector<std::vector<double>> points(m.values.size());
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        points[i].assign(m.values[i].begin(), m.values[i].end());
    }
    return points;
}

/// Per-cluster arithmetic mean of member points, one row per cluster in
/// cluster order.
inline std::vector<std::vector<double>> cluster_profiles(
    const std::vector<std::vector<double>>& points, const ClusterAssignment& assignment) {
    std::vector<std::vector<double>> profiles;
    profiles.reserve(assignment.clusters.size());
    for (const std::vector<std::size_t>& members : assignment.clusters) {
        if (members.empty()) {
            throw ValidationError("cluster_profiles: empty cluster");
        }
        std::vector<double> mean(points[members.front()].size(), 0.0);
        for (std::size_t idx : members) {
            if (idx >= points.size()) {
                throw ValidationError("cluster_profiles: member index out of range");
            }
            for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += points[idx][j];
        }
        for (double& v : mean) v /= static_cast<double>(members.size());
        profiles.push_back(std::move(mean));
    }
    return profiles;
}

}  // namespace gcshi
