#pragma once

#include <optional>
#include <string>

#include "parley/corpus.hpp"
#include "parley/providers.hpp"

namespace parley::local_speaker {

// Monotonically decreasing recency weight over conversational distance d.
struct DecaySpec {
    enum class Kind { geometric, exponential, inverse };
    Kind kind = Kind::geometric;
    double parameter = 0.6;  // lambda for geometric, alpha for exponential

    double operator()(std::size_t d) const;
};

enum class EsMode { avg, max };

// Background-augmented speaker vector: alpha * message centroid +
// (1 - alpha) * background embedding, unit-normalized.
struct AugmentedSpeakerRep {
    embedding::Vec vector;
    double alpha = 0.0;  // min(1, |C_s| / k)
    std::size_t source_turns = 0;
};

// 1 iff the predicted speaker is explicitly addressed in the window:
// @-mention tokens, plus whole-token case-insensitive name matches when
// plain_name_match is on.
int dnr(const std::string& predicted, const corpus::ContextWindow& window,
        bool plain_name_match = true);

// Recency support. Position -1 is excluded; the most recent eligible
// occurrence wins. 0 when the speaker is absent.
double ir(const std::string& predicted, const corpus::ContextWindow& window,
          const DecaySpec& decay);

// Fraction of window turns by the speaker; the denominator is k even for
// short windows.
double pf(const std::string& predicted, const corpus::ContextWindow& window);

// Topical alignment between the window and the speaker's prior turns.
// Falls back to the augmented representation when the speaker has no
// window turns but a background profile exists; nullopt when neither
// source is available or every window turn is the speaker's own.
std::optional<double> ls_es(const std::string& predicted, const corpus::ContextWindow& window,
                            EsMode mode, const providers::ProviderBundle& bundle,
                            const corpus::SpeakerProfile* profile = nullptr);

// pre: background present or the speaker has window turns. Missing
// background degrades to the pure message centroid.
AugmentedSpeakerRep augmented_rep(const std::string& speaker_id,
                                  const corpus::ContextWindow& window,
                                  const providers::ProviderBundle& bundle,
                                  const corpus::SpeakerProfile* profile);

// 1 - sqrt(JSD) between the speaker's topic mixture and the window's;
// nullopt when the speaker has no window turns (or no content tokens).
std::optional<double> ls_ta(const std::string& predicted, const corpus::ContextWindow& window,
                            const providers::ProviderBundle& bundle);

}  // namespace parley::local_speaker
