#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parley/corpus.hpp"
#include "parley/kernels.hpp"
#include "parley/providers.hpp"

namespace parley::global_speaker {

struct ParticipationProfile {
    std::vector<std::string> speakers;  // distinct, in first-appearance order
    std::vector<double> fractions;      // sums to 1
};

struct ConcentrationProfile {
    double spread = 0.0;                   // R over the whole conversation
    std::vector<std::string> speakers;     // first-appearance order
    std::vector<double> contributions;     // Gamma_s >= 0
    std::optional<double> gini;            // undefined when all Gamma are 0
};

ParticipationProfile participation(const corpus::Conversation& conv);

// Normalized speaker entropy; a monologue scores 0 by convention.
double nse(const corpus::Conversation& conv);
double nse_from_counts(const std::vector<std::size_t>& counts);

// Mean MST edge length under d = 1 - sim; 0 below two turns.
double semantic_spread(const std::vector<embedding::Vec>& turn_embeddings,
                       kernels::Exec exec = kernels::Exec::parallel,
                       embedding::ClampMode mode = embedding::ClampMode::zero);

// Floored leave-one-speaker-out spread difference. Throws when the speaker
// owns every turn.
double speaker_contribution(const corpus::Conversation& conv, const std::string& speaker_id,
                            const providers::ProviderBundle& bundle);

std::optional<double> gini_from_contributions(const std::vector<double>& gammas);

// Full concentration profile; gini is nullopt when the total contribution
// is zero or fewer than two speakers participate.
ConcentrationProfile concentration(const corpus::Conversation& conv,
                                   const providers::ProviderBundle& bundle);

std::optional<double> sc_gini(const corpus::Conversation& conv,
                              const providers::ProviderBundle& bundle);

}  // namespace parley::global_speaker
