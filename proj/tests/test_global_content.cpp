#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "parley/global_content.hpp"
#include "parley/synth.hpp"

using namespace parley;
using local_content::ContentThresholds;
using test_helpers::make_conversation;
using test_helpers::make_dataset;

namespace {

corpus::AgendaGraph chain_agenda(std::size_t n) {
    corpus::AgendaGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        g.items.push_back({"a" + std::to_string(i), "item " + std::to_string(i)});
        if (i > 0) g.edges.emplace_back("a" + std::to_string(i - 1), "a" + std::to_string(i));
    }
    g.start_item = "a0";
    return g;
}

}  // namespace

TEST_CASE("linearize: chain, diamond, unreachable nodes") {
    SUBCASE("chain") {
        const auto lin = global_content::linearize(chain_agenda(3));
        CHECK(lin.order == std::vector<std::size_t>{0, 1, 2});
    }
    SUBCASE("diamond a->{b,c}, b->d, c->d visits a,b,d,c") {
        corpus::AgendaGraph g;
        g.items = {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"d", "d"}};
        g.edges = {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}};
        g.start_item = "a";
        const auto lin = global_content::linearize(g);
        CHECK(lin.order == std::vector<std::size_t>{0, 1, 3, 2});
        CHECK(lin.position[3] == 2);
    }
    SUBCASE("isolated node appended last in declaration order") {
        corpus::AgendaGraph g;
        g.items = {{"a", "a"}, {"e", "e"}, {"b", "b"}};
        g.edges = {{"a", "b"}};
        g.start_item = "a";
        const auto lin = global_content::linearize(g);
        CHECK(lin.order == std::vector<std::size_t>{0, 2, 1});
    }
    SUBCASE("output is always a permutation, even on cycles") {
        std::mt19937_64 rng(47);
        for (int iter = 0; iter < 100; ++iter) {
            const std::size_t n = 1 + rng() % 12;
            corpus::AgendaGraph g;
            for (std::size_t i = 0; i < n; ++i) {
                g.items.push_back({"n" + std::to_string(i), "t"});
            }
            const std::size_t edges = rng() % (2 * n);
            for (std::size_t e = 0; e < edges; ++e) {
                g.edges.emplace_back("n" + std::to_string(rng() % n),
                                     "n" + std::to_string(rng() % n));
            }
            g.start_item = "n" + std::to_string(rng() % n);
            const auto lin = global_content::linearize(g);
            REQUIRE(lin.order.size() == n);
            std::vector<bool> seen(n, false);
            for (const auto i : lin.order) {
                CHECK_FALSE(seen[i]);
                seen[i] = true;
            }
        }
    }
}

TEST_CASE("artifact extraction and predicates") {
    SUBCASE("default extractor takes the last fenced block") {
        const auto conv = make_conversation(
            {{"a", "first block ```json\n{\"x\": 1}``` mid"},
             {"b", "plain turn"},
             {"c", "final ```\n{\"answer\": 42}``` trailing"}});
        const auto artifact = global_content::default_artifact_extractor()(conv);
        REQUIRE(artifact.has_value());
        CHECK(*artifact == "{\"answer\": 42}");
    }
    SUBCASE("no fenced block yields nothing") {
        const auto conv = make_conversation({{"a", "no fences here"}});
        CHECK_FALSE(global_content::default_artifact_extractor()(conv).has_value());
    }
    SUBCASE("predicates: contains, regex, json_schema") {
        CHECK(global_content::evaluate_predicate({"contains", "answer"}, "the answer is 42"));
        CHECK_FALSE(global_content::evaluate_predicate({"contains", "answer"}, "nothing"));
        CHECK(global_content::evaluate_predicate({"regex", "ans[a-z]+ is [0-9]+"},
                                                 "the answer is 42"));
        CHECK(global_content::evaluate_predicate(
            {"json_schema", R"({"type": "object", "required": ["x"]})"}, R"({"x": 1})"));
        CHECK_FALSE(global_content::evaluate_predicate(
            {"json_schema", R"({"type": "object", "required": ["x"]})"}, R"({"y": 1})"));
        CHECK_FALSE(global_content::evaluate_predicate({"json_schema", "{}"}, "not json"));
        CHECK(global_content::evaluate_predicate(
            {"json_schema", R"({"properties": {"n": {"type": "integer"}}})"}, R"({"n": 3})"));
        CHECK_FALSE(global_content::evaluate_predicate(
            {"json_schema", R"({"properties": {"n": {"type": "integer"}}})"}, R"({"n": "x"})"));
    }
}

TEST_CASE("task_success: artifact product form and state mode") {
    ContentThresholds th;
    SUBCASE("one false predicate fails, all true passes") {
        const auto conv = make_conversation({{"a", "result ```{\"x\": 1}```"}});
        const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
        corpus::ObjectiveSpec obj;
        obj.mode = corpus::ObjectiveMode::artifact;
        obj.criteria = {{"json_schema", "{}"}, {"contains", "\"x\""}};
        CHECK(global_content::task_success(conv, obj, th, bundle) == 1);
        obj.criteria.push_back({"contains", "absent"});
        CHECK(global_content::task_success(conv, obj, th, bundle) == 0);
    }
    SUBCASE("extraction failure is distinct from zero") {
        const auto conv = make_conversation({{"a", "no artifact anywhere"}});
        const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
        corpus::ObjectiveSpec obj;
        obj.mode = corpus::ObjectiveMode::artifact;
        obj.criteria = {{"contains", "x"}};
        CHECK_THROWS_AS(global_content::task_success(conv, obj, th, bundle),
                        global_content::ArtifactExtractionError);
    }
    SUBCASE("state mode equals terminal-item saturation") {
        std::vector<std::pair<std::string, std::string>> turns;
        for (int i = 0; i < 6; ++i) {
            turns.push_back({"s" + std::to_string(i % 2),
                             "item 0 facet" + std::to_string(i) + " detail" + std::to_string(i)});
        }
        auto conv = make_conversation(turns);
        conv.agenda = chain_agenda(1);
        corpus::ObjectiveSpec obj;
        obj.mode = corpus::ObjectiveMode::state;
        obj.terminal_item_id = "a0";
        const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
        const int phi = global_content::task_success(conv, obj, ContentThresholds{}, bundle);
        const int sat = global_content::sat(conv.agenda->items[0], conv, ContentThresholds{},
                                            bundle);
        CHECK(phi == sat);
    }
}

TEST_CASE("acr counts saturated items; pe averages relevant turns") {
    // item 0 is discussed by diverse on-topic turns; item 1 never comes up
    std::vector<std::pair<std::string, std::string>> turns;
    for (int i = 0; i < 8; ++i) {
        turns.push_back({"s" + std::to_string(i % 3),
                         "item 0 angle" + std::to_string(i) + " nuance" + std::to_string(i * 7)});
    }
    auto conv = make_conversation(turns);
    corpus::AgendaGraph agenda;
    agenda.items = {{"a0", "item 0"}, {"a1", "offtopic subject zz"}};
    agenda.edges = {{"a0", "a1"}};
    agenda.start_item = "a0";
    conv.agenda = agenda;
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    ContentThresholds th;
    th.tau_rel = 0.3;  // turn texts share the item stem but add facets

    const auto cov = local_content::coverage_state(agenda, conv.turns, th, bundle);
    REQUIRE(cov.relevant_turns[0].size() >= 2);

    const double acr = global_content::acr(conv, agenda, th, bundle);
    if (cov.saturated[0]) {
        CHECK(acr == doctest::Approx(0.5));
        const auto pe = global_content::pe(conv, agenda, th, bundle);
        REQUIRE(pe.has_value());
        CHECK(*pe == doctest::Approx(double(cov.relevant_turns[0].size())).epsilon(1e-6));
    } else {
        CHECK(acr == 0.0);
    }
}

TEST_CASE("pe: undefined when nothing saturates") {
    auto conv = make_conversation({{"a", "nothing related"}});
    const auto agenda = chain_agenda(2);
    conv.agenda = agenda;
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    CHECK_FALSE(global_content::pe(conv, agenda, ContentThresholds{}, bundle).has_value());
}

TEST_CASE("extract_trajectory: blocks, argmax, dedup") {
    synth::SynthSpec spec;
    spec.agenda_mode = synth::SynthSpec::AgendaMode::walk;
    spec.agenda_items = 2;
    spec.agenda_hop = 1;
    spec.turns_per_item = 5;
    spec.speakers = 3;
    spec.seed = 9;
    const auto conv = synth::gen_synthetic(spec, "traj");
    REQUIRE(conv.turns.size() == 10);
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));

    SUBCASE("w=5 step=5: first block item 0, second block item 1") {
        const auto traj = global_content::extract_trajectory(conv, *conv.agenda, 5, 5, bundle);
        CHECK(traj.raw == std::vector<std::size_t>{0, 1});
        CHECK(traj.deduped == traj.raw);
    }
    SUBCASE("all turns about one item dedups to a single entry") {
        synth::SynthSpec one = spec;
        one.agenda_items = 1;
        const auto conv1 = synth::gen_synthetic(one, "traj1");
        const auto traj = global_content::extract_trajectory(conv1, *conv1.agenda, 2, 1, bundle);
        CHECK(traj.deduped == std::vector<std::size_t>{0});
    }
    SUBCASE("|turns| < w yields a single block") {
        const auto traj = global_content::extract_trajectory(conv, *conv.agenda, 50, 5, bundle);
        CHECK(traj.raw.size() == 1);
    }
    SUBCASE("dedup matches a direct scan oracle") {
        std::mt19937_64 rng(53);
        for (int iter = 0; iter < 100; ++iter) {
            std::vector<std::size_t> raw(1 + rng() % 12);
            for (auto& z : raw) z = rng() % 4;
            std::vector<std::size_t> expected;
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (i == 0 || raw[i] != raw[i - 1]) expected.push_back(raw[i]);
            }
            global_content::Trajectory t;
            t.raw = raw;
            for (const auto z : raw) {
                if (t.deduped.empty() || t.deduped.back() != z) t.deduped.push_back(z);
            }
            CHECK(t.deduped == expected);
        }
    }
}

TEST_CASE("cs: ordered walks score 1, far jumps regress, M=1 undefined") {
    const auto lin = global_content::linearize(chain_agenda(5));
    auto traj_of = [](std::vector<std::size_t> z) {
        global_content::Trajectory t;
        t.deduped = std::move(z);
        return t;
    };
    SUBCASE("unit hops along the linearization") {
        const auto v = global_content::cs_from_trajectory(traj_of({0, 1, 2, 3, 4}), lin, 1);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(1.0));
    }
    SUBCASE("single far jump with r=1 scores 0") {
        const auto v = global_content::cs_from_trajectory(traj_of({0, 3}), lin, 1);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(0.0));
    }
    SUBCASE("M = 1 is undefined") {
        CHECK_FALSE(global_content::cs_from_trajectory(traj_of({2}), lin, 1).has_value());
    }
    SUBCASE("r-hop reach counts both directions") {
        const auto v = global_content::cs_from_trajectory(traj_of({2, 1, 2, 3}), lin, 1);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(1.0));  // backward unit hop is within reach
    }
}

TEST_CASE("cs end to end: agenda-walk conversation scores 1.0") {
    synth::SynthSpec spec;
    spec.agenda_mode = synth::SynthSpec::AgendaMode::walk;
    spec.agenda_items = 5;
    spec.agenda_hop = 1;
    spec.turns_per_item = 3;
    spec.speakers = 3;
    spec.seed = 21;
    const auto conv = synth::gen_synthetic(spec, "walk");
    const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
    const auto v = global_content::cs(conv, *conv.agenda, 3, 3, 1, bundle);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(1.0));
}

TEST_CASE("pd: displacement per generated turn") {
    SUBCASE("identical endpoints score 0") {
        embedding::Vec v = {1.0f, 0.0f};
        embedding::Vec mid = {0.0f, 1.0f};
        CHECK(global_content::pd_from_embeddings({v, mid, v}) == doctest::Approx(0.0));
    }
    SUBCASE("single turn scores 0") {
        CHECK(global_content::pd_from_embeddings({{1.0f, 0.0f}}) == 0.0);
    }
    SUBCASE("orthogonal unit endpoints, T = 2") {
        embedding::Vec a = {1.0f, 0.0f};
        embedding::Vec b = {0.0f, 1.0f};
        CHECK(global_content::pd_from_embeddings({a, b}) ==
              doctest::Approx(std::sqrt(2.0) / 2.0));
    }
    SUBCASE("interior turns do not matter") {
        std::mt19937_64 rng(59);
        embedding::Vec a = test_helpers::random_unit_vec(rng, 8);
        embedding::Vec b = test_helpers::random_unit_vec(rng, 8);
        const double base = global_content::pd_from_embeddings({a, b, b, a, b});
        const double other = global_content::pd_from_embeddings(
            {a, test_helpers::random_unit_vec(rng, 8), a, b, b});
        CHECK(base == doctest::Approx(other));
    }
    SUBCASE("generated region only") {
        auto conv = make_conversation(
            {{"h", "history alpha"}, {"h", "history beta"}, {"g", "same text"}, {"g", "same text"}});
        conv.history_length = 2;
        const auto bundle = test_helpers::quick_bundle(make_dataset({conv}));
        CHECK(global_content::pd(conv, bundle) == doctest::Approx(0.0));
    }
}

TEST_CASE("hmp: harmonic mean of step sizes") {
    auto vec_at_distance = [](double step, std::size_t count) {
        // points on a line: consecutive L2 distances are exactly `step`
        std::vector<embedding::Vec> out;
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back({float(step * double(i)), 1.0f});
        }
        return out;
    };
    SUBCASE("equal steps of 0.2") {
        const auto v = global_content::hmp_from_embeddings(vec_at_distance(0.2, 6));
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(0.2).epsilon(1e-6));
    }
    SUBCASE("steps 0.1 and 0.3 give 0.15") {
        std::vector<embedding::Vec> pts = {{0.0f, 1.0f}, {0.1f, 1.0f}, {0.4f, 1.0f}};
        const auto v = global_content::hmp_from_embeddings(pts);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(0.15).epsilon(1e-6));
    }
    SUBCASE("a zero step collapses toward epsilon scale") {
        std::vector<embedding::Vec> pts = {{0.0f, 1.0f}, {0.0f, 1.0f}, {0.4f, 1.0f}};
        const auto v = global_content::hmp_from_embeddings(pts);
        REQUIRE(v.has_value());
        CHECK(*v < 1e-6);
    }
    SUBCASE("fewer than two turns undefined") {
        CHECK_FALSE(global_content::hmp_from_embeddings({{1.0f, 0.0f}}).has_value());
    }
    SUBCASE("harmonic mean never exceeds the arithmetic mean") {
        std::mt19937_64 rng(61);
        for (int iter = 0; iter < 200; ++iter) {
            std::vector<embedding::Vec> pts;
            const std::size_t n = 3 + rng() % 8;
            for (std::size_t i = 0; i < n; ++i) {
                pts.push_back(test_helpers::random_unit_vec(rng, 6));
            }
            const auto h = global_content::hmp_from_embeddings(pts);
            REQUIRE(h.has_value());
            double arith = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                arith += embedding::l2_distance(pts[i + 1], pts[i]);
            }
            arith /= double(n - 1);
            CHECK(*h <= arith + 1.1e-8);  // the step regularizer adds at most 1e-8
        }
    }
}
