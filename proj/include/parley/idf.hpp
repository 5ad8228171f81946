#pragma once

#include <string>
#include <unordered_map>

namespace parley::corpus {
struct Dataset;
}

namespace parley::providers {

// IDF(w) = log((1 + N) / (1 + df(w))) + 1 over per-turn documents, where a
// document is the turn's lexical-unit set. Unseen units take the df = 0
// value of the same formula.
class IdfTable {
public:
    IdfTable() = default;

    double weight(const std::string& unit) const;
    double default_weight() const { return default_; }
    std::size_t documents() const { return docs_; }

    static IdfTable build(const corpus::Dataset& ds);

private:
    std::unordered_map<std::string, double> weights_;
    double default_ = 1.0;
    std::size_t docs_ = 0;
};

}  // namespace parley::providers
