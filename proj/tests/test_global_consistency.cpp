#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "parley/global_consistency.hpp"
#include "parley/gmm.hpp"

using namespace parley;
using global_consistency::Mode;
using test_helpers::make_conversation;
using test_helpers::make_dataset;

namespace {

// two tight text clusters for one speaker: a shared core per cluster plus
// one varying word per turn
corpus::Conversation two_cluster_speaker(std::size_t per_cluster) {
    std::vector<std::pair<std::string, std::string>> turns;
    const std::string core_a = "storage compaction levels rocks flush sst wal cache";
    const std::string core_b = "frontend layout grid flexbox margin padding theme font";
    for (std::size_t i = 0; i < per_cluster; ++i) {
        turns.push_back({"s", core_a + " vary" + std::to_string(i)});
        turns.push_back({"s", core_b + " other" + std::to_string(i)});
    }
    turns.push_back({"peer", "unrelated filler"});
    return test_helpers::make_conversation(turns);
}

std::vector<embedding::Vec> gaussian_cluster(std::mt19937_64& rng, const embedding::Vec& mean,
                                             double stddev, std::size_t count) {
    std::normal_distribution<double> noise(0.0, stddev);
    std::vector<embedding::Vec> out;
    for (std::size_t i = 0; i < count; ++i) {
        embedding::Vec v(mean.size());
        for (std::size_t d = 0; d < mean.size(); ++d) {
            v[d] = static_cast<float>(mean[d] + noise(rng));
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

TEST_CASE("single_centroid: basics and the norm guard") {
    const auto conv = make_conversation(
        {{"s", "same message text"}, {"s", "same message text"}, {"o", "noise"}});
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));

    SUBCASE("identical turns give that embedding back") {
        const auto c = global_consistency::single_centroid(conv, "s", bundle);
        REQUIRE(c.k == 1);
        auto expected = bundle.embed("same message text");
        embedding::normalize(expected);
        CHECK(bundle.sim(c.centroids[0], expected) == doctest::Approx(1.0));
    }
    SUBCASE("single turn: centroid equals the turn embedding") {
        const auto solo = make_conversation({{"s", "only message"}, {"o", "noise"}});
        const auto c = global_consistency::single_centroid(solo, "s", bundle);
        auto expected = bundle.embed("only message");
        embedding::normalize(expected);
        CHECK(bundle.sim(c.centroids[0], expected) == doctest::Approx(1.0));
    }
    SUBCASE("absent speaker is an error") {
        CHECK_THROWS_AS(global_consistency::single_centroid(conv, "ghost", bundle),
                        std::invalid_argument);
    }
    SUBCASE("antipodal embeddings trip the unstable-centroid guard") {
        // drive the numeric layer: a near-zero mean must be rejected
        const std::vector<embedding::Vec> pts = {{1.0f, 0.0f}, {-1.0f, 0.0f}};
        CHECK_THROWS_AS(global_consistency::multi_centroids_from_embeddings(pts, "s", 1),
                        std::runtime_error);
    }
}

TEST_CASE("multi_centroids: two well-separated text clusters select K = 2") {
    const auto conv = two_cluster_speaker(5);  // 10 turns for s, K_max = 3
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    std::size_t k2 = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = global_consistency::multi_centroids(conv, "s", bundle, seed);
        CHECK(c.k <= 3);  // K_max = floor(sqrt(10))
        if (c.k == 2) ++k2;
    }
    CHECK(k2 >= 95);
}

TEST_CASE("multi_centroids: identical embeddings and tiny samples force K = 1") {
    const auto conv = make_conversation(
        {{"s", "same"}, {"s", "same"}, {"s", "same"}, {"s", "same"}, {"o", "noise"}});
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto c = global_consistency::multi_centroids(conv, "s", bundle, 7);
    CHECK(c.k == 1);

    // |turns| = 3 means K_max = 1
    const auto small = make_conversation(
        {{"s", "one topic"}, {"s", "two topic"}, {"s", "three topic"}, {"o", "noise"}});
    const auto c3 = global_consistency::multi_centroids(small, "s", bundle, 7);
    CHECK(c3.k == 1);
}

TEST_CASE("multi_centroids: fixed seed gives bit-identical centroids") {
    const auto conv = two_cluster_speaker(4);
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto a = global_consistency::multi_centroids(conv, "s", bundle, 123);
    const auto b = global_consistency::multi_centroids(conv, "s", bundle, 123);
    CHECK(a.k == b.k);
    REQUIRE(a.centroids.size() == b.centroids.size());
    for (std::size_t i = 0; i < a.centroids.size(); ++i) {
        CHECK(a.centroids[i] == b.centroids[i]);
    }
    CHECK(a.bic_trace == b.bic_trace);
}

TEST_CASE("gscc_dc: identical utterances score 1 in both modes") {
    const auto conv = make_conversation(
        {{"s", "steady theme"}, {"s", "steady theme"}, {"o", "noise"}});
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto c = global_consistency::single_centroid(conv, "s", bundle);
    CHECK(global_consistency::gscc_dc(conv, "s", c, Mode::avg, bundle) == doctest::Approx(1.0));
    CHECK(global_consistency::gscc_dc(conv, "s", c, Mode::max, bundle) == doctest::Approx(1.0));
}

TEST_CASE("gscc_dc: max >= avg, and K = 2 beats forced K = 1 on two-cluster speakers") {
    const auto conv = two_cluster_speaker(5);
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto single = global_consistency::single_centroid(conv, "s", bundle);
    const auto multi = global_consistency::multi_centroids(conv, "s", bundle, 3);
    REQUIRE(multi.k >= 2);

    const double avg1 = global_consistency::gscc_dc(conv, "s", single, Mode::avg, bundle);
    const double max1 = global_consistency::gscc_dc(conv, "s", single, Mode::max, bundle);
    const double avg2 = global_consistency::gscc_dc(conv, "s", multi, Mode::avg, bundle);
    const double max2 = global_consistency::gscc_dc(conv, "s", multi, Mode::max, bundle);
    CHECK(max1 >= avg1);
    CHECK(max2 >= avg2);
    CHECK(avg2 > avg1);  // the second prototype captures the second cluster
}

TEST_CASE("nearest-centroid similarity never decreases when a centroid is added") {
    std::mt19937_64 rng(67);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t dim = 8;
        const auto u = test_helpers::random_unit_vec(rng, dim);
        std::vector<embedding::Vec> centroids;
        const std::size_t k = 1 + rng() % 4;
        for (std::size_t i = 0; i < k; ++i) {
            centroids.push_back(test_helpers::random_unit_vec(rng, dim));
        }
        const double before = global_consistency::nearest_centroid_similarity(u, centroids);
        centroids.push_back(test_helpers::random_unit_vec(rng, dim));
        const double after = global_consistency::nearest_centroid_similarity(u, centroids);
        CHECK(after >= before);
    }
}

TEST_CASE("augmented_centroid: alpha endpoints and blend") {
    const auto conv = make_conversation({{"s", "observed content"}, {"o", "noise"}});
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto base = global_consistency::single_centroid(conv, "s", bundle);
    corpus::SpeakerProfile profile;
    profile.speaker_id = "s";
    profile.background_text = "entirely different background";

    SUBCASE("alpha 1 leaves centroids unchanged") {
        const auto aug = global_consistency::augmented_centroid(base, profile, 1.0, bundle);
        CHECK(bundle.sim(aug.centroids[0], base.centroids[0]) == doctest::Approx(1.0));
    }
    SUBCASE("alpha 0 replaces every centroid with the background") {
        const auto aug = global_consistency::augmented_centroid(base, profile, 0.0, bundle);
        auto bg = bundle.embed(*profile.background_text);
        embedding::normalize(bg);
        CHECK(bundle.sim(aug.centroids[0], bg) == doctest::Approx(1.0));
    }
    SUBCASE("missing background is an error") {
        corpus::SpeakerProfile empty;
        empty.speaker_id = "s";
        CHECK_THROWS_AS(global_consistency::augmented_centroid(base, empty, 0.5, bundle),
                        std::invalid_argument);
    }
    SUBCASE("global alpha formula") {
        CHECK(global_consistency::global_alpha(conv, "s", 10) == doctest::Approx(0.1));
        CHECK(global_consistency::global_alpha(conv, "o", 1) == 1.0);
        CHECK(global_consistency::global_alpha(conv, "ghost", 10) == 0.0);
    }
}

TEST_CASE("gmm: bic trace covers K = 1..K_max and selection is the minimizer") {
    std::mt19937_64 rng(71);
    embedding::Vec mean_a(8, 0.0f);
    embedding::Vec mean_b(8, 0.0f);
    for (std::size_t d = 0; d < 4; ++d) {
        mean_a[d] = 1.0f;
        mean_b[d + 4] = 1.0f;
    }
    auto pts = gaussian_cluster(rng, mean_a, 0.05, 10);
    const auto more = gaussian_cluster(rng, mean_b, 0.05, 10);
    pts.insert(pts.end(), more.begin(), more.end());

    std::vector<double> trace;
    const auto fit = gmm::select_by_bic(pts, 4, 99, &trace);
    REQUIRE(trace.size() == 4);
    REQUIRE_FALSE(fit.failed);
    double best = trace[0];
    for (const auto b : trace) {
        if (!std::isnan(b)) best = std::min(best, b);
    }
    CHECK(fit.bic == doctest::Approx(best));
    CHECK(fit.k == 2);
}
