#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "uavnet/error.hpp"
#include "uavnet/policies.hpp"

namespace uavnet::policies {

namespace {

std::size_t nearest(Point p, std::span<const Point> centroids) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d2 = squared_distance(p, centroids[c]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

} // namespace

double within_cluster_ss(std::span<const Point> points, std::span<const Point> centroids) {
    double ss = 0.0;
    for (Point p : points) ss += squared_distance(p, centroids[nearest(p, centroids)]);
    return ss;
}

std::vector<Point> kmeans_centroids(std::span<const Point> points, std::size_t k, Rng& rng,
                                    int max_iters) {
    if (k == 0) throw ConfigError("kmeans: k must be >= 1");
    if (points.empty()) throw ConfigError("kmeans: no points");

    // Seed with k distinct positions, visiting points in a seeded random order.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<Point> centroids;
    for (std::size_t idx : order) {
        if (centroids.size() == k) break;
        if (std::find(centroids.begin(), centroids.end(), points[idx]) == centroids.end()) {
            centroids.push_back(points[idx]);
        }
    }
    if (centroids.size() < k) {
        throw ConfigError(fmt::format("kmeans: k = {} exceeds the {} distinct points", k,
                                      centroids.size()));
    }

    std::vector<std::size_t> label(points.size(), k);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::size_t c = nearest(points[i], centroids);
            if (c != label[i]) {
                label[i] = c;
                changed = true;
            }
        }
        if (!changed) break;

        std::vector<Point> sum(k);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            sum[label[i]].x += points[i].x;
            sum[label[i]].y += points[i].y;
            ++count[label[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0) {
                centroids[c] = {sum[c].x / double(count[c]), sum[c].y / double(count[c])};
                continue;
            }
            std::size_t far = 0;
            double far_d2 = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double d2 = squared_distance(points[i], centroids[label[i]]);
                if (d2 > far_d2) {
                    far_d2 = d2;
                    far = i;
                }
            }
            centroids[c] = points[far];
            label[far] = c;
        }
    }
    return centroids;
}

std::vector<std::size_t> match_to_centroids(std::span<const Point> uavs,
                                            std::span<const Point> centroids) {
    const std::size_t n = uavs.size();
    if (centroids.size() != n) throw ConfigError("kmeans: one centroid per UAV required");
    if (n > 8) throw ConfigError("kmeans: centroid matching supports at most 8 UAVs");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t j = 0; j < n; ++j) cost += distance(uavs[j], centroids[perm[j]]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace uavnet::policies
