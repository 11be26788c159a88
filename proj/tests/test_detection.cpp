#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "proxiscan/detection.hpp"
#include "proxiscan/manifest.hpp"
#include "support/naive_oracle.hpp"
#include "support/synthetic.hpp"

using proxiscan::SimilarityKind;
using Catch::Approx;

namespace {

const std::string kDataDir = PROXISCAN_DATA_DIR;

proxiscan::ProximityProfile profile_of(const std::vector<std::vector<double>>& rows,
                                       std::size_t k,
                                       SimilarityKind kind = SimilarityKind::linear) {
    const auto data = proxiscan::from_rows(rows);
    const auto w = proxiscan::metric_weights(proxiscan::compute_ranges(data));
    return proxiscan::proximity_profile(data, w, k, kind);
}

// Four corners of the unit square: every row sees the same neighborhood,
// so all degrees coincide and d_range is exactly zero.
const std::vector<std::vector<double>> kSquare{{0, 0}, {1, 0}, {0, 1}, {1, 1}};

std::set<std::size_t> flagged_set(const proxiscan::DetectionReport& report) {
    std::set<std::size_t> indices;
    for (const auto& f : report.flagged) indices.insert(f.index);
    return indices;
}

}  // namespace

TEST_CASE("toy gap ratios") {
    const auto profile = profile_of({{0, 0}, {1, 0}, {1, 1}}, 3, SimilarityKind::squared);
    const auto ratios = proxiscan::gap_ratios(profile);
    REQUIRE(ratios.size() == 3);
    REQUIRE(ratios[0] == Approx(1.0));
    REQUIRE(ratios[1] == Approx(1.0));
    REQUIRE(ratios[2] == Approx(2.0));
}

TEST_CASE("gap_ratios signals uniform proximity") {
    const auto profile = profile_of(kSquare, 4);
    REQUIRE(profile.d_range == 0.0);
    REQUIRE_THROWS_AS(proxiscan::gap_ratios(profile), std::domain_error);
}

TEST_CASE("detect never flags under uniform proximity") {
    const auto profile = profile_of(kSquare, 4);
    const auto report = proxiscan::detect(profile, 0.1);
    REQUIRE(report.uniform_proximity);
    REQUIRE_FALSE(report.has_outlier);
    REQUIRE(report.flagged.empty());
}

TEST_CASE("detect preconditions") {
    const auto profile = profile_of(kSquare, 1);
    REQUIRE_THROWS_AS(proxiscan::detect(profile, 0.1), std::invalid_argument);
    const auto ok = profile_of(kSquare, 4);
    REQUIRE_THROWS_AS(proxiscan::detect(ok, 0.0), std::invalid_argument);
}

TEST_CASE("detect flags the smallest-degree row when the gap is wide") {
    // One far point next to a tight cluster: the first gap dominates.
    synth::Rng rng(3);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 50; ++i)
        rows.push_back({0.5 + 0.02 * rng.normal(), 0.5 + 0.02 * rng.normal()});
    rows.push_back({0.0, 0.0});
    const auto profile = profile_of(rows, 4);
    const auto report = proxiscan::detect(profile, 0.1);
    REQUIRE(report.has_outlier);
    REQUIRE(report.flagged.size() == 1);
    REQUIRE(report.flagged[0].index == 50);
    REQUIRE(report.flagged[0].gap_ratio >= 0.1);
    REQUIRE(report.normalized_mins.size() == 4);
    REQUIRE(std::is_sorted(report.normalized_mins.begin(), report.normalized_mins.end()));
}

TEST_CASE("top_m with m = 1 reduces to detect") {
    for (std::uint64_t seed = 101; seed <= 110; ++seed) {
        synth::Rng rng(seed);
        const auto rows = synth::random_dataset(rng, 2 + rng.integer(40) + 3, 3);
        const auto profile = profile_of(rows, 4);
        if (profile.d_range <= 0.0) continue;
        const auto single = proxiscan::detect(profile, 0.1);
        const auto top = proxiscan::top_m(profile, 1, 0.1);
        REQUIRE(single.has_outlier == top.has_outlier);
        REQUIRE(flagged_set(single) == flagged_set(top));
        REQUIRE(single.decisive_gap == Approx(top.decisive_gap));
    }
}

TEST_CASE("top_m flags the planted far points") {
    const auto planted = synth::planted_outliers(17);
    // The oracle confirms the construction: the planted rows hold the three
    // smallest degrees and the fourth boundary gap clears tau.
    const auto degrees = oracle::proximity_degrees(planted.rows, true);
    const auto order = oracle::ascending_order(degrees);
    std::set<std::size_t> smallest(order.begin(), order.begin() + 3);
    REQUIRE(smallest ==
            std::set<std::size_t>(planted.outlier_indices.begin(), planted.outlier_indices.end()));
    REQUIRE(oracle::boundary_gap(degrees, 3) >= 0.1);

    const auto profile = profile_of(planted.rows, 5);
    const auto report = proxiscan::top_m(profile, 3, 0.1);
    REQUIRE(report.has_outlier);
    REQUIRE(flagged_set(report) == smallest);
}

TEST_CASE("top_m returns nothing when every gap is narrow") {
    // Reject-sample a seed whose uniform cloud keeps all three boundary
    // gaps under tau, then require an empty flagged set on it.
    for (std::uint64_t seed = 200;; ++seed) {
        REQUIRE(seed < 260);
        synth::Rng rng(seed);
        const auto rows = synth::random_dataset(rng, 120, 2);
        const auto degrees = oracle::proximity_degrees(rows, true);
        bool all_narrow = true;
        for (std::size_t k = 1; k <= 3; ++k)
            all_narrow = all_narrow && oracle::boundary_gap(degrees, k) < 0.1;
        if (!all_narrow) continue;

        const auto profile = profile_of(rows, 5);
        const auto report = proxiscan::top_m(profile, 3, 0.1);
        REQUIRE_FALSE(report.has_outlier);
        REQUIRE(report.flagged.empty());
        break;
    }
}

TEST_CASE("top_m rejects windows larger than the profile") {
    const auto planted = synth::planted_outliers(17);
    const auto profile = profile_of(planted.rows, 4);
    REQUIRE_THROWS_AS(proxiscan::top_m(profile, 3, 0.1), std::invalid_argument);  // needs 5
    const auto tiny = profile_of(kSquare, 4);
    REQUIRE_THROWS_AS(proxiscan::top_m(tiny, 3, 0.1), std::invalid_argument);  // n < m + 2
}

TEST_CASE("flag counts are bounded and tau-monotone") {
    for (std::uint64_t seed = 301; seed <= 312; ++seed) {
        synth::Rng rng(seed);
        const auto rows = synth::random_dataset(rng, 30, 3);
        const auto profile = profile_of(rows, 6);
        if (profile.d_range <= 0.0) continue;
        std::vector<std::set<std::size_t>> flagged_by_tau;
        for (double tau : {0.01, 0.05, 0.1, 0.3, 0.9}) {
            const auto report = proxiscan::top_m(profile, 4, tau);
            REQUIRE(report.flagged.size() <= 4);
            flagged_by_tau.push_back(flagged_set(report));
        }
        for (std::size_t t = 1; t < flagged_by_tau.size(); ++t)
            REQUIRE(std::includes(flagged_by_tau[t - 1].begin(), flagged_by_tau[t - 1].end(),
                                  flagged_by_tau[t].begin(), flagged_by_tau[t].end()));
    }
}

TEST_CASE("detection reports are invariant under per-attribute rescaling") {
    synth::Rng rng(42);
    const auto rows = synth::random_dataset(rng, 35, 4);
    auto mapped = rows;
    const double a[4] = {2.5, -0.75, 100.0, 0.01};
    const double b[4] = {-3.0, 4.0, 0.0, 12.0};
    for (auto& row : mapped)
        for (std::size_t j = 0; j < 4; ++j) row[j] = a[j] * row[j] + b[j];

    const auto before = proxiscan::top_m(profile_of(rows, 6), 4, 0.05);
    const auto after = proxiscan::top_m(profile_of(mapped, 6), 4, 0.05);
    REQUIRE(before.has_outlier == after.has_outlier);
    REQUIRE(flagged_set(before) == flagged_set(after));
    for (std::size_t i = 0; i < before.normalized_mins.size(); ++i)
        REQUIRE(after.normalized_mins[i] == Approx(before.normalized_mins[i]).margin(1e-9));
}

TEST_CASE("wine detection matches the published indices") {
    const auto manifest = proxiscan::load_manifest(kDataDir + "/manifest.json");
    const auto entry = proxiscan::manifest_lookup(manifest, "wine");
    REQUIRE(entry.has_value());
    const auto data = proxiscan::load_csv(entry->file.string(), entry->options);
    const auto w = proxiscan::metric_weights(proxiscan::compute_ranges(data));
    const auto profile = proxiscan::proximity_profile(data, w, 5, SimilarityKind::linear);

    const auto report = proxiscan::detect(profile, 0.1);
    REQUIRE(report.has_outlier);
    REQUIRE(report.flagged.size() == 1);
    REQUIRE(report.flagged[0].index == 121);
    REQUIRE(report.decisive_gap == Approx(0.1477).margin(0.01));

    // The candidate ranking carries the published triple in order; only
    // the first clears the default tau, so the flagged prefix stops there.
    REQUIRE(profile.k_smallest[0].first == 121);
    REQUIRE(profile.k_smallest[1].first == 158);
    REQUIRE(profile.k_smallest[2].first == 146);
    REQUIRE(profile.k_smallest[3].first == 59);
    const auto top = proxiscan::top_m(profile, 3, 0.1);
    REQUIRE(top.has_outlier);
    REQUIRE(flagged_set(top) == std::set<std::size_t>{121});
}
