#include "parley/global_speaker.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace parley::global_speaker {

using embedding::Vec;

ParticipationProfile participation(const corpus::Conversation& conv) {
    ParticipationProfile p;
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& t : conv.turns) {
        if (counts.emplace(t.speaker_id, 0).second) p.speakers.push_back(t.speaker_id);
        ++counts[t.speaker_id];
    }
    p.fractions.reserve(p.speakers.size());
    for (const auto& s : p.speakers) {
        p.fractions.push_back(double(counts[s]) / double(conv.turns.size()));
    }
    return p;
}

double nse_from_counts(const std::vector<std::size_t>& counts) {
    std::size_t total = 0;
    std::size_t speakers = 0;
    for (const auto c : counts) {
        total += c;
        if (c > 0) ++speakers;
    }
    if (total == 0) throw std::invalid_argument("nse over zero turns");
    if (speakers <= 1) return 0.0;  // log2(1) denominator: monologue pins to 0
    double h = 0.0;
    for (const auto c : counts) {
        if (c == 0) continue;
        const double p = double(c) / double(total);
        h -= p * std::log2(p);
    }
    return h / std::log2(double(speakers));
}

double nse(const corpus::Conversation& conv) {
    const auto p = participation(conv);
    if (p.speakers.size() <= 1) return 0.0;
    double h = 0.0;
    for (const double f : p.fractions) {
        if (f > 0.0) h -= f * std::log2(f);
    }
    return h / std::log2(double(p.speakers.size()));
}

double semantic_spread(const std::vector<Vec>& turn_embeddings, kernels::Exec exec,
                       embedding::ClampMode mode) {
    return kernels::mst_mean_edge(turn_embeddings, exec, mode);
}

double speaker_contribution(const corpus::Conversation& conv, const std::string& speaker_id,
                            const providers::ProviderBundle& bundle) {
    const auto rest = corpus::turns_not_by_speaker(conv.turns, speaker_id);
    if (rest.empty()) {
        throw std::invalid_argument("speaker_contribution: speaker owns every turn");
    }
    const auto all_vecs = bundle.embed_turns(conv.turns);
    const auto rest_vecs = bundle.embed_turns(rest);
    const double full = semantic_spread(all_vecs, kernels::Exec::parallel,
                                        bundle.config().clamp);
    const double without = semantic_spread(rest_vecs, kernels::Exec::parallel,
                                           bundle.config().clamp);
    return std::max(0.0, full - without);
}

std::optional<double> gini_from_contributions(const std::vector<double>& gammas) {
    const std::size_t s = gammas.size();
    if (s < 2) return std::nullopt;
    double total = 0.0;
    for (const double g : gammas) total += g;
    if (total <= 0.0) return std::nullopt;  // all redundant != perfectly equal
    double diff = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) diff += std::abs(gammas[i] - gammas[j]);
    }
    return diff / (2.0 * double(s) * total);
}

ConcentrationProfile concentration(const corpus::Conversation& conv,
                                   const providers::ProviderBundle& bundle) {
    ConcentrationProfile c;
    const auto p = participation(conv);
    c.speakers = p.speakers;
    const auto all_vecs = bundle.embed_turns(conv.turns);
    c.spread = semantic_spread(all_vecs, kernels::Exec::parallel, bundle.config().clamp);

    c.contributions.resize(c.speakers.size(), 0.0);
    if (c.speakers.size() >= 2) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(c.speakers.size()); ++i) {
            const auto rest = corpus::turns_not_by_speaker(conv.turns, c.speakers[std::size_t(i)]);
            const auto rest_vecs = bundle.embed_turns(rest);
            const double without = semantic_spread(rest_vecs, kernels::Exec::serial,
                                                   bundle.config().clamp);
            c.contributions[std::size_t(i)] = std::max(0.0, c.spread - without);
        }
    }
    c.gini = gini_from_contributions(c.contributions);
    return c;
}

std::optional<double> sc_gini(const corpus::Conversation& conv,
                              const providers::ProviderBundle& bundle) {
    return concentration(conv, bundle).gini;
}

}  // namespace parley::global_speaker
