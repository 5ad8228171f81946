#include "parley/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "parley/errors.hpp"

namespace parley::synth {

using corpus::Conversation;
using corpus::Turn;
using nlohmann::json;

namespace {

std::vector<std::size_t> apportion(const std::vector<double>& dist, std::size_t total) {
    // largest-remainder: exact fractions up to integer rounding
    std::vector<std::size_t> counts(dist.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double exact = dist[i] * double(total);
        counts[i] = std::size_t(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t j = 0; assigned < total; ++j, ++assigned) {
        ++counts[remainders[j % remainders.size()].second];
    }
    return counts;
}

std::string pool_word(const std::string& prefix, std::size_t pool, std::size_t word) {
    return prefix + std::to_string(pool) + "w" + std::to_string(word);
}

std::string sample_text(const std::string& prefix, std::size_t pool, std::size_t pool_size,
                        std::mt19937_64& rng, std::size_t anchors = 0) {
    std::uniform_int_distribution<std::size_t> len(5, 9);
    std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
    const std::size_t n = len(rng);
    std::string out;
    // anchor words pin the text to its pool's head words
    for (std::size_t i = 0; i < anchors; ++i) {
        if (i) out += ' ';
        out += pool_word(prefix, pool, i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.empty()) out += ' ';
        out += pool_word(prefix, pool, pick(rng));
    }
    return out;
}

}  // namespace

Conversation gen_synthetic(const SynthSpec& spec, const std::string& id) {
    if (spec.speakers == 0) throw std::invalid_argument("synth needs at least one speaker");
    std::vector<double> dist = spec.participation;
    if (dist.empty()) dist.assign(spec.speakers, 1.0 / double(spec.speakers));
    if (dist.size() != spec.speakers) {
        throw std::invalid_argument("participation length must equal speaker count");
    }
    double total = 0.0;
    for (const double p : dist) {
        if (p < 0.0) throw std::invalid_argument("participation entries must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("participation must sum to 1");
    }

    std::mt19937_64 rng(spec.seed);
    Conversation conv;
    conv.id = id;
    conv.is_generated = true;

    // agenda walk overrides the free-drift topic machinery
    std::vector<std::size_t> visit;
    constexpr std::size_t kPoolSize = 20;
    if (spec.agenda_mode != SynthSpec::AgendaMode::none) {
        if (spec.agenda_items == 0 || spec.agenda_hop == 0 || spec.turns_per_item == 0) {
            throw std::invalid_argument("agenda walk needs items, hop, turns_per_item >= 1");
        }
        corpus::AgendaGraph agenda;
        for (std::size_t i = 0; i < spec.agenda_items; ++i) {
            std::string text;
            for (std::size_t wd = 0; wd < 5; ++wd) {
                if (wd) text += ' ';
                text += pool_word("agenda", i, wd);
            }
            agenda.items.push_back({"a" + std::to_string(i), text});
            if (i > 0) {
                agenda.edges.emplace_back("a" + std::to_string(i - 1), "a" + std::to_string(i));
            }
        }
        agenda.start_item = "a0";
        conv.agenda = agenda;

        if (spec.agenda_mode == SynthSpec::AgendaMode::walk) {
            for (std::size_t i = 0; i < spec.agenda_items; i += spec.agenda_hop) visit.push_back(i);
        } else {
            for (std::ptrdiff_t i = std::ptrdiff_t(spec.agenda_items) - 1; i >= 0;
                 i -= std::ptrdiff_t(spec.agenda_hop)) {
                visit.push_back(std::size_t(i));
            }
        }
    }

    const std::size_t turn_count = visit.empty() ? spec.turns : visit.size() * spec.turns_per_item;
    if (turn_count == 0) throw std::invalid_argument("synth needs at least one turn");

    // speaker order: apportioned counts, seeded shuffle
    std::vector<std::size_t> speaker_seq;
    const auto counts = apportion(dist, turn_count);
    for (std::size_t s = 0; s < spec.speakers; ++s) {
        speaker_seq.insert(speaker_seq.end(), counts[s], s);
    }
    std::shuffle(speaker_seq.begin(), speaker_seq.end(), rng);

    std::size_t active_topic = 0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t t = 0; t < turn_count; ++t) {
        Turn turn;
        turn.index = t;
        turn.speaker_id = "speaker" + std::to_string(speaker_seq[t]);
        if (!visit.empty()) {
            const std::size_t item = visit[t / spec.turns_per_item];
            turn.text = sample_text("agenda", item, kPoolSize, rng, 2);
        } else {
            if (spec.topics == 0) throw std::invalid_argument("synth needs at least one topic");
            if (t > 0 && unif(rng) < spec.drift) {
                active_topic = (active_topic + 1) % spec.topics;
            }
            turn.text = sample_text("topic", active_topic, 30, rng);
        }
        conv.participants.insert(turn.speaker_id);
        conv.turns.push_back(std::move(turn));
    }
    return conv;
}

corpus::Dataset gen_synthetic_dataset(const SynthSpec& spec, std::size_t count,
                                      const std::string& label) {
    corpus::Dataset ds;
    ds.source_label = label;
    for (std::size_t i = 0; i < count; ++i) {
        SynthSpec one = spec;
        one.seed = spec.seed + i;
        std::ostringstream id;
        id << "synth-" << std::setw(4) << std::setfill('0') << i;
        ds.conversations.push_back(gen_synthetic(one, id.str()));
    }
    return ds;
}

SynthSpec SynthSpec::from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid synth spec: ") + e.what());
    }
    SynthSpec s;
    s.speakers = j.value("speakers", s.speakers);
    s.turns = j.value("turns", s.turns);
    if (j.contains("participation")) {
        s.participation = j["participation"].get<std::vector<double>>();
    }
    s.topics = j.value("topics", s.topics);
    s.drift = j.value("drift", s.drift);
    if (j.contains("agenda")) {
        const auto& a = j["agenda"];
        const std::string mode = a.value("mode", "walk");
        if (mode == "walk") {
            s.agenda_mode = AgendaMode::walk;
        } else if (mode == "reverse") {
            s.agenda_mode = AgendaMode::reverse;
        } else if (mode == "none") {
            s.agenda_mode = AgendaMode::none;
        } else {
            throw ParseError("agenda mode must be walk, reverse, or none, got " + mode);
        }
        s.agenda_items = a.value("items", s.agenda_items);
        s.agenda_hop = a.value("hop", s.agenda_hop);
        s.turns_per_item = a.value("turns_per_item", s.turns_per_item);
    }
    s.seed = j.value("seed", s.seed);
    return s;
}

SynthSpec SynthSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open synth spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string SynthSpec::to_json() const {
    json j;
    j["speakers"] = speakers;
    j["turns"] = turns;
    if (!participation.empty()) j["participation"] = participation;
    j["topics"] = topics;
    j["drift"] = drift;
    if (agenda_mode != AgendaMode::none) {
        j["agenda"] = {{"mode", agenda_mode == AgendaMode::walk ? "walk" : "reverse"},
                       {"items", agenda_items},
                       {"hop", agenda_hop},
                       {"turns_per_item", turns_per_item}};
    }
    j["seed"] = seed;
    return j.dump();
}

}  // namespace parley::synth
