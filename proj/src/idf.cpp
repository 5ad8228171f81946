#include "parley/idf.hpp"

#include <cmath>

#include "parley/corpus.hpp"
#include "parley/text.hpp"

namespace parley::providers {

double IdfTable::weight(const std::string& unit) const {
    auto it = weights_.find(unit);
    return it == weights_.end() ? default_ : it->second;
}

IdfTable IdfTable::build(const corpus::Dataset& ds) {
    IdfTable t;
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& conv : ds.conversations) {
        for (const auto& turn : conv.turns) {
            ++t.docs_;
            for (const auto& u : text::lexical_units(turn.text)) ++df[u];
        }
    }
    const double n = double(t.docs_);
    for (const auto& [unit, count] : df) {
        t.weights_.emplace(unit, std::log((1.0 + n) / (1.0 + double(count))) + 1.0);
    }
    t.default_ = std::log(1.0 + n) + 1.0;  // df = 0 path of the same formula
    return t;
}

}  // namespace parley::providers
