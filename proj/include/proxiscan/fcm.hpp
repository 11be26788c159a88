#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxiscan/dataset.hpp"
#include "proxiscan/metric.hpp"

namespace proxiscan {

struct FcmConfig {
    double fuzzifier = 2.0;    ///< m > 1; larger means softer memberships
    double tol = 1e-5;         ///< stop when max-abs membership change drops below this
    std::size_t max_iter = 300;
    std::uint64_t rng_seed = 0;
};

/// Converged state of one run. memberships is clusters x points; every
/// column sums to 1. objective_trace records J = sum u^m d^2 per iteration
/// and is non-increasing.
struct FcmResult {
    std::vector<std::vector<double>> centers;
    std::vector<std::vector<double>> memberships;
    std::vector<double> objective_trace;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

/// Unbiased draw in [0, bound) via rejection sampling. Written out instead
/// of std::uniform_int_distribution, whose mapping is implementation
/// defined; this keeps seeded runs identical across standard libraries.
inline std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t min = (-bound) % bound;  // 2^64 - bound mod bound
    std::uint64_t r = gen();
    while (r < min) r = gen();
    return r % bound;
}

}  // namespace detail

/// Center matrix for an outlier-seeded run: the M outlier rows first
/// (order preserved), then c distinct non-outlier rows drawn uniformly
/// without replacement. The generator is pinned to std::mt19937_64 so a
/// seed reproduces the same centers on every platform.
inline std::vector<std::vector<double>> seed_centers(const Dataset& data,
                                                     const std::vector<std::size_t>& outlier_indices,
                                                     std::size_t c, std::uint64_t rng_seed) {
    if (c < 1) throw std::invalid_argument("c must be positive");
    std::set<std::size_t> distinct(outlier_indices.begin(), outlier_indices.end());
    if (distinct.size() != outlier_indices.size())
        throw std::invalid_argument("outlier indices must be distinct");
    for (std::size_t idx : outlier_indices)
        if (idx >= data.n()) throw std::invalid_argument("outlier index out of range");
    if (outlier_indices.size() + c > data.n())
        throw std::invalid_argument("more centers than points");

    std::vector<std::vector<double>> centers;
    centers.reserve(outlier_indices.size() + c);
    for (std::size_t idx : outlier_indices) centers.push_back(data.rows[idx]);

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < data.n(); ++i)
        if (!distinct.count(i)) pool.push_back(i);

    // Partial Fisher-Yates over the non-outlier rows.
    std::mt19937_64 gen(rng_seed);
    for (std::size_t t = 0; t < c; ++t) {
        const std::size_t pick = t + detail::bounded_draw(gen, pool.size() - t);
        std::swap(pool[t], pool[pick]);
        centers.push_back(data.rows[pool[t]]);
    }
    return centers;
}

/// Alternating-optimization FCM under the same diagonal metric as the
/// detector. Memberships come first each iteration:
///   u_ik = [ sum_j (d_ik / d_jk)^(2/(m-1)) ]^-1
/// then centers move to the u^m-weighted means. A point coinciding with
/// one or more centers gets its membership split evenly among them, so
/// zero distances never divide. Loops run in fixed index order, making a
/// given (dataset, centers, config) bit-reproducible.
inline FcmResult run_fcm(const Dataset& data, std::vector<std::vector<double>> init_centers,
                         const MetricWeights& w, const FcmConfig& cfg = {}) {
    const std::size_t n = data.n();
    const std::size_t num_clusters = init_centers.size();
    if (num_clusters < 2) throw std::invalid_argument("need at least 2 centers");
    for (const auto& center : init_centers)
        if (center.size() != data.p()) throw std::invalid_argument("center dimension mismatch");
    if (cfg.fuzzifier <= 1.0) throw std::invalid_argument("fuzzifier must exceed 1");
    if (cfg.tol <= 0.0) throw std::invalid_argument("tol must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

    const double exponent = 1.0 / (cfg.fuzzifier - 1.0);

    FcmResult result;
    result.centers = std::move(init_centers);
    result.memberships.assign(num_clusters, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> previous;
    std::vector<std::vector<double>> dist_sq(num_clusters, std::vector<double>(n, 0.0));

    for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
        if (iter > 1) {
            // Center update: u^m-weighted mean per cluster. A cluster with
            // no weight anywhere keeps its previous center.
            for (std::size_t i = 0; i < num_clusters; ++i) {
                std::vector<double> numerator(data.p(), 0.0);
                double denominator = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double um = std::pow(result.memberships[i][k], cfg.fuzzifier);
                    denominator += um;
                    for (std::size_t j = 0; j < data.p(); ++j)
                        numerator[j] += um * data.rows[k][j];
                }
                if (denominator > 0.0)
                    for (std::size_t j = 0; j < data.p(); ++j)
                        result.centers[i][j] = numerator[j] / denominator;
            }
        }

        for (std::size_t i = 0; i < num_clusters; ++i)
            for (std::size_t k = 0; k < n; ++k)
                dist_sq[i][k] = a_norm_sq(data.rows[k], result.centers[i], w);

        previous = result.memberships;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t coincident = 0;
            for (std::size_t i = 0; i < num_clusters; ++i)
                if (dist_sq[i][k] == 0.0) ++coincident;
            if (coincident > 0) {
                for (std::size_t i = 0; i < num_clusters; ++i)
                    result.memberships[i][k] =
                        dist_sq[i][k] == 0.0 ? 1.0 / static_cast<double>(coincident) : 0.0;
                continue;
            }
            for (std::size_t i = 0; i < num_clusters; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < num_clusters; ++j)
                    sum += std::pow(dist_sq[i][k] / dist_sq[j][k], exponent);
                result.memberships[i][k] = 1.0 / sum;
            }
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < num_clusters; ++i)
            for (std::size_t k = 0; k < n; ++k)
                objective +=
                    std::pow(result.memberships[i][k], cfg.fuzzifier) * dist_sq[i][k];
        result.objective_trace.push_back(objective);
        result.iterations = iter;

        if (iter > 1) {
            double delta = 0.0;
            for (std::size_t i = 0; i < num_clusters; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    delta = std::max(delta,
                                     std::abs(result.memberships[i][k] - previous[i][k]));
            if (delta < cfg.tol) {
                result.converged = true;
                break;
            }
        }
    }
    return result;
}

/// Hard assignment of one point: the cluster with the largest membership,
/// ties resolved toward the lowest cluster index.
inline std::size_t hard_assignment(const FcmResult& result, std::size_t point) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.memberships.size(); ++i)
        if (result.memberships[i][point] > result.memberships[best][point]) best = i;
    return best;
}

struct OutlierClusterReport {
    std::size_t cluster = 0;
    std::size_t population = 0;
    std::vector<std::size_t> members;
    bool confirmed = false;
};

/// Per outlier-seeded cluster: population under hard assignment and a
/// confirmed/refuted verdict against the smallness bound.
struct ClusterVerification {
    std::vector<OutlierClusterReport> clusters;
    std::size_t total_outlier_population = 0;
    std::size_t bound = 0;
};

/// Checks whether the first m_outliers clusters stayed small. A cluster is
/// confirmed outlier-like when its hard-assigned population is at most the
/// bound (default: m_outliers itself).
inline ClusterVerification verify_outlier_clusters(const FcmResult& result, std::size_t m_outliers,
                                                   const Dataset& data,
                                                   std::optional<std::size_t> bound = std::nullopt) {
    if (m_outliers > result.memberships.size())
        throw std::invalid_argument("m_outliers exceeds cluster count");
    ClusterVerification verification;
    verification.bound = bound.value_or(m_outliers);
    if (m_outliers == 0) return verification;

    verification.clusters.resize(m_outliers);
    for (std::size_t i = 0; i < m_outliers; ++i) verification.clusters[i].cluster = i;
    for (std::size_t k = 0; k < data.n(); ++k) {
        const std::size_t cluster = hard_assignment(result, k);
        if (cluster < m_outliers) {
            verification.clusters[cluster].members.push_back(k);
            ++verification.clusters[cluster].population;
            ++verification.total_outlier_population;
        }
    }
    for (auto& entry : verification.clusters)
        entry.confirmed = entry.population <= verification.bound;
    return verification;
}

}  // namespace proxiscan
