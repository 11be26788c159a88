#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxiscan/proximity.hpp"

namespace proxiscan {

struct FlaggedPoint {
    std::size_t index;  ///< 0-based dataset row
    double degree;
    double gap_ratio;   ///< (next degree - this degree) / d_range
};

/// Outcome of the gap rule. raw_mins/normalized_mins hold the K smallest
/// degrees and their d_range-normalized values so consumers can
/// re-threshold without recomputation. decisive_gap is the normalized gap
/// the verdict was decided on.
struct DetectionReport {
    std::vector<double> raw_mins;
    std::vector<double> normalized_mins;
    double d_range = 0.0;
    double tau = 0.0;
    bool has_outlier = false;
    bool uniform_proximity = false;
    std::vector<FlaggedPoint> flagged;
    double decisive_gap = 0.0;
};

/// The k-th smallest degree divided by d_range, for k = 1..K.
inline std::vector<double> gap_ratios(const ProximityProfile& profile) {
    if (profile.d_range <= 0.0)
        throw std::domain_error("uniform proximity: d_range is zero, no outliers by construction");
    std::vector<double> values;
    values.reserve(profile.k_smallest.size());
    for (const auto& [idx, degree] : profile.k_smallest)
        values.push_back(degree / profile.d_range);
    return values;
}

namespace detail {

inline DetectionReport make_report(const ProximityProfile& profile, double tau) {
    DetectionReport report;
    report.tau = tau;
    report.d_range = profile.d_range;
    for (const auto& [idx, degree] : profile.k_smallest) report.raw_mins.push_back(degree);
    if (profile.d_range > 0.0) {
        for (double d : report.raw_mins) report.normalized_mins.push_back(d / profile.d_range);
    } else {
        report.uniform_proximity = true;
    }
    return report;
}

}  // namespace detail

/// Single-outlier rule: the row with the smallest degree is flagged iff
/// the normalized gap to the second smallest reaches tau. A zero d_range
/// means all degrees are equal, which never flags.
inline DetectionReport detect(const ProximityProfile& profile, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
    if (profile.k_smallest.size() < 2)
        throw std::invalid_argument("profile must carry at least 2 order statistics");
    DetectionReport report = detail::make_report(profile, tau);
    if (report.uniform_proximity) return report;

    const auto& [idx1, d1] = profile.k_smallest[0];
    const double d2 = profile.k_smallest[1].second;
    report.decisive_gap = (d2 - d1) / profile.d_range;
    if (report.decisive_gap >= tau) {
        report.has_outlier = true;
        report.flagged.push_back({idx1, d1, report.decisive_gap});
    }
    return report;
}

/// Top-M extension: within the M+2 smallest degrees, flag the largest
/// prefix of length <= M whose boundary gap (D^{k+1} - D^k) / d_range
/// reaches tau at the prefix end k. Each flagged entry carries the
/// normalized gap to its successor; m = 1 reduces to detect().
inline DetectionReport top_m(const ProximityProfile& profile, std::size_t m, double tau) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
    if (profile.degrees.size() < m + 2 || profile.k_smallest.size() < m + 2)
        throw std::invalid_argument("dataset too small for top-M (need m + 2 = " +
                                    std::to_string(m + 2) + " order statistics)");
    DetectionReport report = detail::make_report(profile, tau);
    if (report.uniform_proximity) return report;

    std::size_t prefix = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        const double gap =
            (profile.k_smallest[k].second - profile.k_smallest[k - 1].second) / profile.d_range;
        if (gap >= tau) prefix = k;
    }
    report.decisive_gap =
        (profile.k_smallest[prefix > 0 ? prefix : 1].second -
         profile.k_smallest[prefix > 0 ? prefix - 1 : 0].second) /
        profile.d_range;
    if (prefix > 0) {
        report.has_outlier = true;
        for (std::size_t k = 0; k < prefix; ++k) {
            const auto& [idx, degree] = profile.k_smallest[k];
            const double gap = (profile.k_smallest[k + 1].second - degree) / profile.d_range;
            report.flagged.push_back({idx, degree, gap});
        }
    }
    return report;
}

}  // namespace proxiscan
