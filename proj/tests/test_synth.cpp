#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "parley/corpus.hpp"
#include "parley/global_speaker.hpp"
#include "parley/synth.hpp"

using namespace parley;

TEST_CASE("synth: uniform participation lands near the target fractions") {
    synth::SynthSpec spec;
    spec.speakers = 4;
    spec.turns = 100;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        spec.seed = seed;
        const auto conv = synth::gen_synthetic(spec, "s" + std::to_string(seed));
        REQUIRE(conv.turns.size() == 100);
        const auto p = global_speaker::participation(conv);
        for (const auto f : p.fractions) {
            CHECK(f == doctest::Approx(0.25).epsilon(0.4));  // within +-0.1 absolute
            CHECK(std::abs(f - 0.25) <= 0.1);
        }
    }
}

TEST_CASE("synth: skewed participation follows the distribution") {
    synth::SynthSpec spec;
    spec.speakers = 3;
    spec.turns = 40;
    spec.participation = {0.5, 0.25, 0.25};
    const auto conv = synth::gen_synthetic(spec, "skew");
    std::map<std::string, std::size_t> counts;
    for (const auto& t : conv.turns) ++counts[t.speaker_id];
    CHECK(counts["speaker0"] == 20);
    CHECK(counts["speaker1"] == 10);
    CHECK(counts["speaker2"] == 10);
}

TEST_CASE("synth: single-speaker spec scores NSE 0") {
    synth::SynthSpec spec;
    spec.speakers = 1;
    spec.turns = 12;
    const auto conv = synth::gen_synthetic(spec, "solo");
    CHECK(global_speaker::nse(conv) == 0.0);
}

TEST_CASE("synth: seed fixes the output exactly") {
    synth::SynthSpec spec;
    spec.speakers = 3;
    spec.turns = 20;
    spec.seed = 77;
    const auto a = synth::gen_synthetic(spec, "same");
    const auto b = synth::gen_synthetic(spec, "same");
    CHECK(corpus::serialize_conversation(a) == corpus::serialize_conversation(b));
    spec.seed = 78;
    const auto c = synth::gen_synthetic(spec, "same");
    CHECK(corpus::serialize_conversation(a) != corpus::serialize_conversation(c));
}

TEST_CASE("synth: output parses back through the dataset schema") {
    synth::SynthSpec spec;
    spec.agenda_mode = synth::SynthSpec::AgendaMode::walk;
    spec.agenda_items = 4;
    spec.turns_per_item = 2;
    spec.speakers = 2;
    const auto ds = synth::gen_synthetic_dataset(spec, 3, "roundtrip");
    std::string file;
    for (const auto& conv : ds.conversations) {
        file += corpus::serialize_conversation(conv) + "\n";
    }
    std::istringstream in(file);
    const auto parsed = corpus::parse_dataset_stream(in, "mem");
    REQUIRE(parsed.conversations.size() == 3);
    CHECK(parsed.conversations[0].agenda.has_value());
    CHECK(parsed.conversations[0].agenda->items.size() == 4);
    CHECK(parsed.conversations[1].turns.size() == 8);
}

TEST_CASE("synth spec: JSON round trip") {
    synth::SynthSpec spec;
    spec.speakers = 5;
    spec.turns = 33;
    spec.participation = {0.2, 0.2, 0.2, 0.2, 0.2};
    spec.agenda_mode = synth::SynthSpec::AgendaMode::reverse;
    spec.agenda_items = 6;
    spec.agenda_hop = 2;
    spec.seed = 99;
    const auto parsed = synth::SynthSpec::from_json(spec.to_json());
    CHECK(parsed.speakers == 5);
    CHECK(parsed.participation == spec.participation);
    CHECK(parsed.agenda_mode == synth::SynthSpec::AgendaMode::reverse);
    CHECK(parsed.agenda_hop == 2);
    CHECK(parsed.seed == 99);
}
