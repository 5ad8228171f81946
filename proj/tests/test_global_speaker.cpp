#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "parley/global_speaker.hpp"

using namespace parley;
using test_helpers::make_conversation;
using test_helpers::make_dataset;

TEST_CASE("nse: boundaries and the hand case") {
    CHECK(global_speaker::nse_from_counts({7}) == 0.0);  // monologue
    CHECK(global_speaker::nse_from_counts({5, 5, 5, 5}) == doctest::Approx(1.0));
    // p = (0.5, 0.25, 0.25): H = 1.5 bits over log2(3)
    CHECK(global_speaker::nse_from_counts({2, 1, 1}) == doctest::Approx(0.946395).epsilon(1e-4));
    CHECK_THROWS_AS(global_speaker::nse_from_counts({0, 0}), std::invalid_argument);
}

TEST_CASE("nse: permutation and reorder invariance") {
    const auto conv = make_conversation(
        {{"a", "1"}, {"b", "2"}, {"a", "3"}, {"c", "4"}, {"a", "5"}, {"b", "6"}});
    const auto reordered = make_conversation(
        {{"c", "4"}, {"a", "5"}, {"b", "6"}, {"a", "1"}, {"a", "3"}, {"b", "2"}});
    CHECK(global_speaker::nse(conv) == doctest::Approx(global_speaker::nse(reordered)));
}

TEST_CASE("semantic_spread: hand case with pairwise distances 0.1/0.2/0.3") {
    // three vectors with prescribed cosines: the MST keeps edges 0.1, 0.2
    // regardless of which tree enumeration is used
    std::vector<std::vector<double>> dist = {{0.0, 0.1, 0.2}, {0.1, 0.0, 0.3}, {0.2, 0.3, 0.0}};
    const auto oracle = test_helpers::brute_force_mst(dist);
    CHECK(oracle.best_total == doctest::Approx(0.3));
    CHECK(oracle.best_total / 2.0 == doctest::Approx(0.15));

    // and through the embedding layer: cos 0.9 / 0.8 / 0.7 on unit vectors
    embedding::Vec a = {1.0f, 0.0f, 0.0f};
    embedding::Vec b = {0.9f, float(std::sqrt(1.0 - 0.81)), 0.0f};
    // c chosen so cos(a,c) = 0.8 and cos(b,c) = 0.7 within float noise
    const double c0 = 0.8;
    const double c1 = (0.7 - 0.9 * 0.8) / double(b[1]);
    const double c2 = std::sqrt(std::max(0.0, 1.0 - c0 * c0 - c1 * c1));
    embedding::Vec c = {float(c0), float(c1), float(c2)};
    const double spread = global_speaker::semantic_spread({a, b, c});
    CHECK(spread == doctest::Approx(0.15).epsilon(1e-4));
}

TEST_CASE("semantic_spread: identical embeddings give zero, two turns give the edge") {
    embedding::Vec v = {1.0f, 0.0f};
    CHECK(global_speaker::semantic_spread({v, v, v}) == doctest::Approx(0.0));
    CHECK(global_speaker::semantic_spread({v}) == 0.0);
    const auto [a, b] = test_helpers::vectors_with_cosine(0.6);
    CHECK(global_speaker::semantic_spread({a, b}) == doctest::Approx(0.4));
}

TEST_CASE("speaker_contribution: redundant speaker contributes ~0; floor applies") {
    const auto conv = make_conversation({{"a", "alpha topic one"},
                                         {"b", "alpha topic one"},
                                         {"a", "beta topic two"},
                                         {"b", "beta topic two"},
                                         {"c", "gamma topic three"}});
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    // b duplicates a's embeddings exactly, so removing b cannot shrink the
    // spread beyond MST re-counting effects; the floor keeps it at >= 0
    const double gamma_b = global_speaker::speaker_contribution(conv, "b", bundle);
    CHECK(gamma_b >= 0.0);
    CHECK(gamma_b == doctest::Approx(0.0).epsilon(1e-9));

    const auto solo = make_conversation({{"only", "x"}, {"only", "y"}});
    CHECK_THROWS_AS(global_speaker::speaker_contribution(solo, "only", bundle),
                    std::invalid_argument);
}

TEST_CASE("speaker_contribution: matches a brute-force MST recomputation") {
    std::mt19937_64 rng(41);
    const std::vector<std::string> vocab = {"red", "green", "blue", "cyan", "teal", "plum"};
    for (int iter = 0; iter < 25; ++iter) {
        std::vector<std::pair<std::string, std::string>> turns;
        const std::size_t n = 4 + rng() % 3;  // 4..6 turns
        for (std::size_t i = 0; i < n; ++i) {
            std::string text = vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()] +
                               std::to_string(rng() % 50);
            turns.push_back({"s" + std::to_string(i % 3), text});
        }
        const auto conv = make_conversation(turns);
        const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));

        auto brute_spread = [&](const std::vector<corpus::Turn>& ts) {
            if (ts.size() < 2) return 0.0;
            const auto vecs = bundle.embed_turns(ts);
            std::vector<std::vector<double>> dist(ts.size(), std::vector<double>(ts.size(), 0.0));
            for (std::size_t i = 0; i < ts.size(); ++i) {
                for (std::size_t j = 0; j < ts.size(); ++j) {
                    dist[i][j] = 1.0 - bundle.sim(vecs[i], vecs[j]);
                }
            }
            const auto mst = test_helpers::brute_force_mst(dist);
            return mst.best_total / double(ts.size() - 1);
        };

        for (const auto& s : conv.participants) {
            const auto rest = corpus::turns_not_by_speaker(conv.turns, s);
            if (rest.empty()) continue;
            const double expected =
                std::max(0.0, brute_spread(conv.turns) - brute_spread(rest));
            const double got = global_speaker::speaker_contribution(conv, s, bundle);
            CHECK(got == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("gini: equal contributions 0, single contributor (S-1)/S, zero sum undefined") {
    CHECK(*global_speaker::gini_from_contributions({0.4, 0.4, 0.4}) == doctest::Approx(0.0));
    CHECK(*global_speaker::gini_from_contributions({1.0, 0.0, 0.0}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK_FALSE(global_speaker::gini_from_contributions({0.0, 0.0}).has_value());
    CHECK_FALSE(global_speaker::gini_from_contributions({1.0}).has_value());
}

TEST_CASE("gini stays within [0, (S-1)/S] on random contribution vectors") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t s = 2 + rng() % 7;
        std::vector<double> gammas(s);
        for (auto& g : gammas) g = unif(rng);
        const auto v = global_speaker::gini_from_contributions(gammas);
        REQUIRE(v.has_value());
        CHECK(*v >= 0.0);
        CHECK(*v <= double(s - 1) / double(s) + 1e-12);
    }
}

TEST_CASE("sc_gini end to end stays in range") {
    const auto conv = make_conversation({{"a", "unique alpha thread"},
                                         {"b", "unique beta thread"},
                                         {"c", "unique gamma thread"},
                                         {"a", "more alpha content"},
                                         {"b", "duplicate beta thread"}});
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto v = global_speaker::sc_gini(conv, bundle);
    if (v) {
        CHECK(*v >= 0.0);
        CHECK(*v <= 1.0);
    }
}
