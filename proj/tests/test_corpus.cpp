#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "parley/corpus.hpp"
#include "parley/errors.hpp"

using namespace parley;
using test_helpers::make_conversation;

namespace {

const char* kRecord =
    R"({"id": "c1", "turns": [{"speaker": "alice", "text": "hi"}, {"speaker": "bob", "text": "hello"}, {"speaker": "alice", "text": "status?"}]})";

}  // namespace

TEST_CASE("parse_dataset: one line, three turns, two speakers") {
    std::istringstream in(kRecord);
    const auto ds = corpus::parse_dataset_stream(in, "mem");
    REQUIRE(ds.conversations.size() == 1);
    const auto& conv = ds.conversations[0];
    CHECK(conv.turns.size() == 3);
    CHECK(conv.participants.size() == 2);
    CHECK(conv.turns[2].index == 2);
}

TEST_CASE("parse_dataset: empty utterance names the turn index") {
    std::istringstream in(
        R"({"id": "c1", "turns": [{"speaker": "a", "text": "ok"}, {"speaker": "b", "text": "  "}]})");
    try {
        corpus::parse_dataset_stream(in, "mem");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("turn 1") != std::string::npos);
        CHECK(e.line() == 1);
    }
}

TEST_CASE("parse_dataset: duplicate conversation ids rejected") {
    std::istringstream in(std::string(kRecord) + "\n" + kRecord);
    CHECK_THROWS_AS(corpus::parse_dataset_stream(in, "mem"), ParseError);
}

TEST_CASE("parse_dataset: agenda edge endpoints validated") {
    std::istringstream in(
        R"({"id": "c", "turns": [{"speaker": "a", "text": "x"}], "agenda": {"items": [{"id": "a1", "text": "t"}], "edges": [["a1", "zz"]], "start": "a1"}})");
    CHECK_THROWS_AS(corpus::parse_dataset_stream(in, "mem"), ParseError);
}

TEST_CASE("parse_dataset: objective mode fields are exclusive") {
    std::istringstream in(
        R"({"id": "c", "turns": [{"speaker": "a", "text": "x"}], "objective": {"mode": "state", "terminal_item": "a1", "criteria": []}})");
    CHECK_THROWS_AS(corpus::parse_dataset_stream(in, "mem"), ParseError);
}

TEST_CASE("round-trip: serialize(parse(x)) is field-equal") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        corpus::Conversation conv;
        conv.id = "conv" + std::to_string(iter);
        const std::size_t turns = 1 + rng() % 6;
        for (std::size_t t = 0; t < turns; ++t) {
            corpus::Turn turn;
            turn.index = t;
            turn.speaker_id = "s" + std::to_string(rng() % 3);
            turn.text = "word" + std::to_string(rng() % 100) + " tail";
            if (rng() % 2) turn.timestamp = "2026-01-01T00:00:0" + std::to_string(t % 10) + "Z";
            conv.participants.insert(turn.speaker_id);
            conv.turns.push_back(turn);
        }
        if (rng() % 2) {
            corpus::AgendaGraph g;
            g.items = {{"a", "alpha item"}, {"b", "beta item"}};
            g.edges = {{"a", "b"}};
            g.start_item = "a";
            conv.agenda = g;
        }
        conv.history_length = rng() % (conv.turns.size() + 1);

        const std::string line = corpus::serialize_conversation(conv);
        const auto parsed = corpus::parse_conversation_line(line, 1);
        CHECK(corpus::serialize_conversation(parsed) == line);
        CHECK(parsed.id == conv.id);
        CHECK(parsed.turns.size() == conv.turns.size());
        CHECK(parsed.history_length == conv.history_length);
        CHECK(parsed.participants == conv.participants);
        for (std::size_t t = 0; t < turns; ++t) {
            CHECK(parsed.turns[t].speaker_id == conv.turns[t].speaker_id);
            CHECK(parsed.turns[t].text == conv.turns[t].text);
            CHECK(parsed.turns[t].timestamp == conv.turns[t].timestamp);
        }
    }
}

TEST_CASE("context_window slicing") {
    std::vector<std::pair<std::string, std::string>> turns;
    for (int i = 0; i < 10; ++i) turns.push_back({"s" + std::to_string(i % 3), "t" + std::to_string(i)});
    const auto conv = make_conversation(turns);

    SUBCASE("end=10 k=4 keeps turns 6..9") {
        const auto w = corpus::context_window(conv, 10, 4);
        REQUIRE(w.turns.size() == 4);
        CHECK(w.turns.front().index == 6);
        CHECK(w.turns.back().index == 9);
    }
    SUBCASE("short window at the start") {
        const auto w = corpus::context_window(conv, 2, 5);
        REQUIRE(w.turns.size() == 2);
        CHECK(w.turns.front().index == 0);
    }
    SUBCASE("end_index 0 is an error") {
        CHECK_THROWS_AS(corpus::context_window(conv, 0, 4), std::out_of_range);
    }
    SUBCASE("end_index beyond the conversation is an error") {
        CHECK_THROWS_AS(corpus::context_window(conv, 11, 4), std::out_of_range);
    }
    SUBCASE("window size invariant |turns| = min(k, end_index)") {
        for (std::size_t end = 1; end <= 10; ++end) {
            for (std::size_t k = 1; k <= 12; ++k) {
                const auto w = corpus::context_window(conv, end, k);
                CHECK(w.turns.size() == std::min(k, end));
            }
        }
    }
}

TEST_CASE("turns_by_speaker partitions the turn list") {
    const auto conv = make_conversation(
        {{"a", "one"}, {"b", "two"}, {"a", "three"}, {"c", "four"}, {"a", "five"}});
    const auto a = corpus::turns_by_speaker(conv.turns, "a");
    CHECK(a.size() == 3);
    CHECK(a[1].text == "three");
    CHECK(corpus::turns_by_speaker(conv.turns, "zz").empty());

    std::size_t total = 0;
    for (const auto& s : conv.participants) {
        total += corpus::turns_by_speaker(conv.turns, s).size();
    }
    CHECK(total == conv.turns.size());
}
