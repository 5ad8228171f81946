#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parley/corpus.hpp"

namespace parley::synth {

// Seeded synthetic-conversation generator used by property tests and the
// synth CLI subcommand. A fixed seed fixes the output exactly.
struct SynthSpec {
    std::size_t speakers = 4;
    std::size_t turns = 30;
    // empty = uniform; must sum to 1. Turn counts follow the distribution
    // by largest-remainder apportionment, then a seeded shuffle orders
    // them.
    std::vector<double> participation;

    std::size_t topics = 3;
    double drift = 0.1;  // per-turn probability of advancing the active topic

    // walk: item-relevant text in linearization order, stride agenda_hop;
    // reverse: the same walk from the last item backwards.
    enum class AgendaMode { none, walk, reverse };
    AgendaMode agenda_mode = AgendaMode::none;
    std::size_t agenda_items = 5;
    std::size_t agenda_hop = 1;
    std::size_t turns_per_item = 3;

    std::uint64_t seed = 1;

    static SynthSpec from_json(const std::string& content);
    static SynthSpec from_json_file(const std::string& path);
    std::string to_json() const;
};

corpus::Conversation gen_synthetic(const SynthSpec& spec, const std::string& id);

// count conversations with seeds spec.seed, spec.seed + 1, ...
corpus::Dataset gen_synthetic_dataset(const SynthSpec& spec, std::size_t count,
                                      const std::string& label);

}  // namespace parley::synth
