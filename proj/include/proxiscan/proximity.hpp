#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "proxiscan/dataset.hpp"
#include "proxiscan/metric.hpp"

namespace proxiscan {

/// Per-point proximity degrees and the order statistics the decision rule
/// consumes. degrees[i] is the sum of similarities from row i to every
/// other row, so it lies in [0, n-1]; a low degree marks an isolated point.
struct ProximityProfile {
    std::vector<double> degrees;
    std::vector<std::size_t> ascending_order;
    double d_range = 0.0;
    std::vector<std::pair<std::size_t, double>> k_smallest;
    SimilarityKind kind = SimilarityKind::linear;
};

/// Degree of a single row: sum of similarities to all other rows.
inline double proximity_degree(std::size_t i, const Dataset& data, const MetricWeights& w,
                               SimilarityKind kind = SimilarityKind::linear) {
    if (data.n() < 2) throw std::invalid_argument("insufficient data: need at least 2 rows");
    if (i >= data.n()) throw std::invalid_argument("row index out of range");
    double degree = 0.0;
    for (std::size_t j = 0; j < data.n(); ++j) {
        if (j == i) continue;
        degree += similarity(data.rows[i], data.rows[j], w, kind);
    }
    return degree;
}

/// Degrees for every row plus ascending order, d_range and the k smallest
/// (index, degree) pairs. Each pair is evaluated once, in lexicographic
/// (i, j) order with i < j, and added to both endpoints; the fixed order
/// keeps results bit-reproducible run to run. Ties in the ordering break
/// by ascending row index.
inline ProximityProfile proximity_profile(const Dataset& data, const MetricWeights& w,
                                          std::size_t k = 4,
                                          SimilarityKind kind = SimilarityKind::linear) {
    const std::size_t n = data.n();
    if (n < 2) throw std::invalid_argument("insufficient data: need at least 2 rows");
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (n < k)
        throw std::invalid_argument("dataset too small for requested order statistics (n=" +
                                    std::to_string(n) + ", k=" + std::to_string(k) + ")");

    ProximityProfile profile;
    profile.kind = kind;
    profile.degrees.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = similarity(data.rows[i], data.rows[j], w, kind);
            profile.degrees[i] += s;
            profile.degrees[j] += s;
        }
    }

    profile.ascending_order.resize(n);
    std::iota(profile.ascending_order.begin(), profile.ascending_order.end(), std::size_t{0});
    std::sort(profile.ascending_order.begin(), profile.ascending_order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (profile.degrees[a] != profile.degrees[b])
                      return profile.degrees[a] < profile.degrees[b];
                  return a < b;
              });

    profile.d_range = profile.degrees[profile.ascending_order.back()] -
                      profile.degrees[profile.ascending_order.front()];
    profile.k_smallest.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t idx = profile.ascending_order[r];
        profile.k_smallest.emplace_back(idx, profile.degrees[idx]);
    }
    return profile;
}

}  // namespace proxiscan
