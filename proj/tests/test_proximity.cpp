#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "proxiscan/manifest.hpp"
#include "proxiscan/proximity.hpp"
#include "support/naive_oracle.hpp"
#include "support/synthetic.hpp"

using proxiscan::SimilarityKind;
using Catch::Approx;

namespace {

const std::string kDataDir = PROXISCAN_DATA_DIR;

struct Prepared {
    proxiscan::Dataset data;
    proxiscan::MetricWeights weights;
};

Prepared prepare(std::vector<std::vector<double>> rows) {
    Prepared prepared{proxiscan::from_rows(std::move(rows)), {}};
    prepared.weights = proxiscan::metric_weights(proxiscan::compute_ranges(prepared.data));
    return prepared;
}

}  // namespace

TEST_CASE("toy degrees under the squared similarity") {
    const auto [data, w] = prepare({{0, 0}, {1, 0}, {1, 1}});
    REQUIRE(proxiscan::proximity_degree(0, data, w, SimilarityKind::squared) == Approx(0.5));
    REQUIRE(proxiscan::proximity_degree(1, data, w, SimilarityKind::squared) == Approx(1.0));
    REQUIRE(proxiscan::proximity_degree(2, data, w, SimilarityKind::squared) == Approx(0.5));
}

TEST_CASE("two rows at opposite corners have zero degree") {
    const auto [data, w] = prepare({{0, 0}, {1, 1}});
    for (auto kind : {SimilarityKind::linear, SimilarityKind::squared}) {
        REQUIRE(proxiscan::proximity_degree(0, data, w, kind) == 0.0);
        REQUIRE(proxiscan::proximity_degree(1, data, w, kind) == 0.0);
    }
}

TEST_CASE("proximity_degree preconditions") {
    const auto [data, w] = prepare({{0, 0}, {1, 1}});
    REQUIRE_THROWS_AS(proxiscan::proximity_degree(5, data, w, SimilarityKind::linear),
                      std::invalid_argument);
    const auto single = proxiscan::from_rows({{1.0, 2.0}});
    REQUIRE_THROWS_AS(proxiscan::proximity_degree(0, single, w, SimilarityKind::linear),
                      std::invalid_argument);
}

TEST_CASE("profile orders degrees with ties broken by row index") {
    const auto [data, w] = prepare({{0, 0}, {1, 0}, {1, 1}});
    const auto profile = proxiscan::proximity_profile(data, w, 3, SimilarityKind::squared);
    REQUIRE(profile.k_smallest.size() == 3);
    REQUIRE(profile.k_smallest[0].first == 0);
    REQUIRE(profile.k_smallest[0].second == Approx(0.5));
    REQUIRE(profile.k_smallest[1].first == 2);
    REQUIRE(profile.k_smallest[1].second == Approx(0.5));
    REQUIRE(profile.k_smallest[2].first == 1);
    REQUIRE(profile.k_smallest[2].second == Approx(1.0));
    REQUIRE(profile.d_range == Approx(0.5));
}

TEST_CASE("profile rejects k larger than n") {
    const auto [data, w] = prepare({{0, 0}, {1, 0}, {1, 1}});
    REQUIRE_THROWS_AS(proxiscan::proximity_profile(data, w, 4, SimilarityKind::squared),
                      std::invalid_argument);
}

TEST_CASE("profile matches the standalone degree computation") {
    synth::Rng rng(21);
    const auto rows = synth::random_dataset(rng, 30, 4);
    const auto [data, w] = prepare(rows);
    for (auto kind : {SimilarityKind::linear, SimilarityKind::squared}) {
        const auto profile = proxiscan::proximity_profile(data, w, 4, kind);
        for (std::size_t i = 0; i < data.n(); ++i)
            REQUIRE(profile.degrees[i] ==
                    Approx(proxiscan::proximity_degree(i, data, w, kind)).margin(1e-9));
    }
}

TEST_CASE("degrees agree with the naive oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        synth::Rng rng(seed);
        const std::size_t n = 2 + rng.integer(63);
        const std::size_t p = 1 + rng.integer(8);
        const auto rows = synth::random_dataset(rng, n, p);
        const auto [data, w] = prepare(rows);
        for (auto kind : {SimilarityKind::linear, SimilarityKind::squared}) {
            const auto profile = proxiscan::proximity_profile(data, w, 2, kind);
            const auto expected =
                oracle::proximity_degrees(rows, kind == SimilarityKind::linear);
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(profile.degrees[i] == Approx(expected[i]).margin(1e-9));
        }
    }
}

TEST_CASE("degrees stay within [0, n-1] and d_range is consistent") {
    synth::Rng rng(33);
    const auto rows = synth::random_dataset(rng, 40, 3);
    const auto [data, w] = prepare(rows);
    const auto profile = proxiscan::proximity_profile(data, w, 4, SimilarityKind::linear);
    const double n_minus_1 = static_cast<double>(data.n() - 1);
    for (double d : profile.degrees) {
        REQUIRE(d >= 0.0);
        REQUIRE(d <= n_minus_1);
    }
    const auto [lo, hi] = std::minmax_element(profile.degrees.begin(), profile.degrees.end());
    REQUIRE(profile.d_range == Approx(*hi - *lo));
    REQUIRE(profile.d_range >= 0.0);
}

TEST_CASE("permuting rows permutes degrees") {
    synth::Rng rng(55);
    const auto rows = synth::random_dataset(rng, 25, 4);
    const auto [data, w] = prepare(rows);
    const auto base = proxiscan::proximity_profile(data, w, 4, SimilarityKind::linear);

    auto shuffled = rows;
    std::vector<std::size_t> perm(rows.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng.integer(i)]);
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[perm[i]] = rows[i];

    const auto [data2, w2] = prepare(shuffled);
    const auto moved = proxiscan::proximity_profile(data2, w2, 4, SimilarityKind::linear);
    for (std::size_t i = 0; i < perm.size(); ++i)
        REQUIRE(moved.degrees[perm[i]] == Approx(base.degrees[i]).margin(1e-9));
}

TEST_CASE("wine profile reproduces the published order statistics") {
    const auto manifest = proxiscan::load_manifest(kDataDir + "/manifest.json");
    const auto entry = proxiscan::manifest_lookup(manifest, "wine");
    REQUIRE(entry.has_value());
    const auto data = proxiscan::load_csv(entry->file.string(), entry->options);
    REQUIRE(data.n() == 178);
    REQUIRE(data.p() == 13);

    const auto w = proxiscan::metric_weights(proxiscan::compute_ranges(data));
    const auto profile = proxiscan::proximity_profile(data, w, 4, SimilarityKind::linear);
    REQUIRE(profile.k_smallest[0].second == Approx(109.67).margin(0.05));
    REQUIRE(profile.d_range == Approx(27.9).margin(0.05));
}
