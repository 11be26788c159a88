#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proxiscan/dataset.hpp"

namespace proxiscan {

/// Thrown when every attribute is constant over the dataset; the
/// range-normalized metric is undefined there.
class DegenerateDatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-attribute ranges: ranges[j] = max_i x_ij - min_i x_ij.
struct RangeVector {
    std::vector<double> ranges;
};

/// Diagonal metric: weights[j] = ranges[j]^-2 for non-constant attributes,
/// 0 for constant ones (they carry no discriminative information). p_eff
/// counts the nonzero weights and is the normalizer for similarities, so
/// boundedness survives constant attributes.
struct MetricWeights {
    std::vector<double> weights;
    std::size_t p_eff = 0;
};

/// Two supported maps from the normalized squared distance q in [0,1]
/// to a similarity in [0,1]:
///   squared: 1 - q
///   linear:  1 - sqrt(q), i.e. one minus the normalized distance itself
/// The linear form is the pipeline default.
enum class SimilarityKind { linear, squared };

inline const char* to_string(SimilarityKind kind) {
    return kind == SimilarityKind::linear ? "linear" : "squared";
}

inline SimilarityKind similarity_kind_from_string(std::string_view name) {
    if (name == "linear") return SimilarityKind::linear;
    if (name == "squared") return SimilarityKind::squared;
    throw std::invalid_argument("unknown similarity kind '" + std::string(name) +
                                "' (expected linear or squared)");
}

inline RangeVector compute_ranges(const Dataset& data) {
    if (data.n() == 0 || data.p() == 0) throw std::invalid_argument("empty input");
    RangeVector result;
    result.ranges.reserve(data.p());
    for (std::size_t j = 0; j < data.p(); ++j) {
        double lo = data.rows[0][j];
        double hi = data.rows[0][j];
        for (const auto& row : data.rows) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        result.ranges.push_back(hi - lo);
    }
    return result;
}

inline MetricWeights metric_weights(const RangeVector& ranges) {
    MetricWeights w;
    w.weights.reserve(ranges.ranges.size());
    for (double r : ranges.ranges) {
        if (r > 0.0) {
            w.weights.push_back(1.0 / (r * r));
            ++w.p_eff;
        } else {
            w.weights.push_back(0.0);
        }
    }
    if (w.p_eff == 0) throw DegenerateDatasetError("degenerate dataset: all attributes constant");
    return w;
}

/// Weighted squared distance sum_j weights[j] * (x_j - y_j)^2. For two
/// dataset rows the result lies in [0, p_eff].
inline double a_norm_sq(std::span<const double> x, std::span<const double> y,
                        const MetricWeights& w) {
    if (x.size() != y.size() || x.size() != w.weights.size())
        throw std::invalid_argument("dimension mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - y[j];
        sum += w.weights[j] * d * d;
    }
    return sum;
}

/// Range-normalized similarity in [0,1]; symmetric, 1 on identical points,
/// 0 on opposite corners of the range box. Out-of-box inputs saturate at 0.
inline double similarity(std::span<const double> x, std::span<const double> y,
                         const MetricWeights& w, SimilarityKind kind) {
    double q = a_norm_sq(x, y, w) / static_cast<double>(w.p_eff);
    q = std::clamp(q, 0.0, 1.0);  // absorb rounding at the box boundary
    const double s = kind == SimilarityKind::squared ? 1.0 - q : 1.0 - std::sqrt(q);
    return std::clamp(s, 0.0, 1.0);
}

}  // namespace proxiscan
