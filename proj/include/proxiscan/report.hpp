#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxiscan/dataset.hpp"
#include "proxiscan/detection.hpp"
#include "proxiscan/fcm.hpp"
#include "proxiscan/proximity.hpp"

namespace proxiscan {

/// FNV-1a fingerprint of a file, hex encoded. Embedded in reports so a
/// result can be tied to the exact fixture bytes that produced it.
inline std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for fingerprinting");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[4096];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char hex[19];
    std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

inline nlohmann::ordered_json summary_to_json(const DatasetSummary& summary) {
    nlohmann::ordered_json j;
    j["samples"] = summary.samples;
    j["attributes"] = summary.attributes;
    if (summary.classes)
        j["classes"] = *summary.classes;
    else
        j["classes"] = nullptr;
    auto stats = nlohmann::ordered_json::array();
    for (const auto& s : summary.stats) {
        stats.push_back(
            {{"name", s.name}, {"min", s.min}, {"max", s.max}, {"range", s.range}});
    }
    j["attribute_stats"] = stats;
    return j;
}

inline nlohmann::ordered_json profile_to_json(const ProximityProfile& profile) {
    nlohmann::ordered_json j;
    j["similarity"] = to_string(profile.kind);
    auto mins = nlohmann::ordered_json::array();
    for (const auto& [idx, degree] : profile.k_smallest)
        mins.push_back({{"index0", idx}, {"index1", idx + 1}, {"degree", degree}});
    j["k_smallest"] = mins;
    j["d_range"] = profile.d_range;
    return j;
}

inline nlohmann::ordered_json detection_to_json(const DetectionReport& report) {
    nlohmann::ordered_json j;
    j["tau"] = report.tau;
    j["raw_mins"] = report.raw_mins;
    j["normalized_mins"] = report.normalized_mins;
    j["d_range"] = report.d_range;
    j["uniform_proximity"] = report.uniform_proximity;
    j["decisive_gap"] = report.decisive_gap;
    j["has_outlier"] = report.has_outlier;
    auto flagged = nlohmann::ordered_json::array();
    for (const auto& f : report.flagged) {
        flagged.push_back({{"index0", f.index},
                           {"index1", f.index + 1},
                           {"degree", f.degree},
                           {"gap_ratio", f.gap_ratio}});
    }
    j["flagged"] = flagged;
    return j;
}

inline nlohmann::ordered_json fcm_to_json(const FcmResult& result) {
    nlohmann::ordered_json j;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["objective_trace"] = result.objective_trace;
    j["centers"] = result.centers;
    return j;
}

inline nlohmann::ordered_json verification_to_json(const ClusterVerification& verification) {
    nlohmann::ordered_json j;
    j["bound"] = verification.bound;
    j["total_outlier_population"] = verification.total_outlier_population;
    auto clusters = nlohmann::ordered_json::array();
    for (const auto& entry : verification.clusters) {
        clusters.push_back({{"cluster", entry.cluster},
                            {"population", entry.population},
                            {"members", entry.members},
                            {"confirmed", entry.confirmed}});
    }
    j["clusters"] = clusters;
    return j;
}

}  // namespace proxiscan
