#pragma once

#include <optional>
#include <string>

#include "parley/corpus.hpp"
#include "parley/local_speaker.hpp"
#include "parley/providers.hpp"

namespace parley::local_consistency {

enum class Mode { avg, max, min };

// Alignment of the candidate with the predicted speaker's window turns;
// nullopt when the speaker has none.
std::optional<double> lscc_es(const std::string& candidate_text, const std::string& predicted,
                              const corpus::ContextWindow& window, Mode mode,
                              const providers::ProviderBundle& bundle);

// Alignment with the background-augmented speaker representation.
// pre: background present or the speaker has window turns.
double lscc_es_aug(const std::string& candidate_text, const std::string& predicted,
                   const corpus::ContextWindow& window,
                   const providers::ProviderBundle& bundle,
                   const corpus::SpeakerProfile* profile);

}  // namespace parley::local_consistency
