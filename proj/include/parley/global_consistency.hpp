#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parley/corpus.hpp"
#include "parley/providers.hpp"

namespace parley::global_consistency {

enum class Mode { avg, max };

// Centroid prototypes for one speaker over the whole conversation.
struct SpeakerCentroids {
    std::string speaker_id;
    std::vector<embedding::Vec> centroids;  // unit-normalized, K >= 1
    std::size_t k = 0;
    std::vector<double> bic_trace;  // index i holds the K = i + 1 fit (NaN = failed)
    bool em_fallback = false;       // every EM fit failed; mean centroid used
};

// Mean of the speaker's turn embeddings, re-normalized. Throws when the
// speaker is absent or the mean is degenerate (near-zero norm).
SpeakerCentroids single_centroid(const corpus::Conversation& conv,
                                 const std::string& speaker_id,
                                 const providers::ProviderBundle& bundle);

// GMM prototypes with BIC-selected K, bounded by floor(sqrt(n)). Falls
// back to the single centroid below two turns or on EM failure.
SpeakerCentroids multi_centroids(const corpus::Conversation& conv,
                                 const std::string& speaker_id,
                                 const providers::ProviderBundle& bundle, std::uint64_t seed);
SpeakerCentroids multi_centroids_from_embeddings(std::vector<embedding::Vec> points,
                                                 const std::string& speaker_id,
                                                 std::uint64_t seed);

// Per-utterance best-centroid similarity, aggregated over the speaker's
// utterances.
double gscc_dc(const corpus::Conversation& conv, const std::string& speaker_id,
               const SpeakerCentroids& centroids, Mode mode,
               const providers::ProviderBundle& bundle);

double nearest_centroid_similarity(const embedding::Vec& utterance,
                                   const std::vector<embedding::Vec>& centroids,
                                   embedding::ClampMode clamp = embedding::ClampMode::zero);

// Each centroid blended with the background embedding at weight alpha,
// re-normalized.
SpeakerCentroids augmented_centroid(const SpeakerCentroids& centroids,
                                    const corpus::SpeakerProfile& profile, double alpha,
                                    const providers::ProviderBundle& bundle);

// alpha for the global case: min(1, |turns by s| / k_global).
double global_alpha(const corpus::Conversation& conv, const std::string& speaker_id,
                    std::size_t k_global);

}  // namespace parley::global_consistency
