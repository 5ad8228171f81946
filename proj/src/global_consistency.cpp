#include "parley/global_consistency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parley/gmm.hpp"
#include "parley/text.hpp"

namespace parley::global_consistency {

using embedding::Vec;
using providers::ProviderBundle;

namespace {

std::vector<Vec> speaker_embeddings(const corpus::Conversation& conv,
                                    const std::string& speaker_id, const ProviderBundle& bundle) {
    const auto own = corpus::turns_by_speaker(conv.turns, speaker_id);
    if (own.empty()) {
        throw std::invalid_argument("speaker has no turns in conversation: " + speaker_id);
    }
    auto vecs = bundle.embed_turns(own);
    for (auto& v : vecs) embedding::normalize(v);
    return vecs;
}

Vec normalized_mean(const std::vector<Vec>& vecs) {
    Vec mean = embedding::mean_vector(vecs);
    if (!embedding::normalize(mean, 1e-9)) {
        throw std::runtime_error("unstable centroid: near-zero mean embedding");
    }
    return mean;
}

}  // namespace

SpeakerCentroids single_centroid(const corpus::Conversation& conv, const std::string& speaker_id,
                                 const ProviderBundle& bundle) {
    SpeakerCentroids out;
    out.speaker_id = speaker_id;
    out.centroids.push_back(normalized_mean(speaker_embeddings(conv, speaker_id, bundle)));
    out.k = 1;
    return out;
}

SpeakerCentroids multi_centroids_from_embeddings(std::vector<Vec> points,
                                                 const std::string& speaker_id,
                                                 std::uint64_t seed) {
    SpeakerCentroids out;
    out.speaker_id = speaker_id;
    if (points.empty()) throw std::invalid_argument("multi_centroids over zero points");
    for (auto& p : points) embedding::normalize(p);

    const std::size_t k_max = std::size_t(std::floor(std::sqrt(double(points.size()))));
    if (points.size() < 2 || k_max < 1) {
        out.centroids.push_back(normalized_mean(points));
        out.k = 1;
        return out;
    }

    const gmm::FitResult fit = gmm::select_by_bic(points, k_max, seed, &out.bic_trace);
    if (fit.failed) {
        out.centroids.push_back(normalized_mean(points));
        out.k = 1;
        out.em_fallback = true;
        return out;
    }
    for (const auto& m : fit.means) {
        Vec c = m;
        if (!embedding::normalize(c, 1e-9)) {
            out.centroids.clear();
            out.centroids.push_back(normalized_mean(points));
            out.k = 1;
            out.em_fallback = true;
            return out;
        }
        out.centroids.push_back(std::move(c));
    }
    out.k = fit.k;
    return out;
}

SpeakerCentroids multi_centroids(const corpus::Conversation& conv, const std::string& speaker_id,
                                 const ProviderBundle& bundle, std::uint64_t seed) {
    return multi_centroids_from_embeddings(speaker_embeddings(conv, speaker_id, bundle),
                                           speaker_id, seed);
}

double nearest_centroid_similarity(const Vec& utterance, const std::vector<Vec>& centroids,
                                   embedding::ClampMode clamp) {
    double best = 0.0;
    bool first = true;
    for (const auto& c : centroids) {
        const double s = embedding::similarity(utterance, c, clamp);
        if (first || s > best) {
            best = s;
            first = false;
        }
    }
    if (first) throw std::invalid_argument("no centroids");
    return best;
}

double gscc_dc(const corpus::Conversation& conv, const std::string& speaker_id,
               const SpeakerCentroids& centroids, Mode mode, const ProviderBundle& bundle) {
    const auto vecs = speaker_embeddings(conv, speaker_id, bundle);
    double sum = 0.0;
    double mx = 0.0;
    for (const auto& v : vecs) {
        const double s = nearest_centroid_similarity(v, centroids.centroids,
                                                     bundle.config().clamp);
        sum += s;
        mx = std::max(mx, s);
    }
    // the true mean never exceeds the max; summation round-off must not either
    return mode == Mode::max ? mx : std::min(sum / double(vecs.size()), mx);
}

SpeakerCentroids augmented_centroid(const SpeakerCentroids& centroids,
                                    const corpus::SpeakerProfile& profile, double alpha,
                                    const ProviderBundle& bundle) {
    if (!profile.background_text || text::trim(*profile.background_text).empty()) {
        throw std::invalid_argument("augmented_centroid requires background text");
    }
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    Vec bg = bundle.embed(*profile.background_text);
    embedding::normalize(bg);

    SpeakerCentroids out = centroids;
    for (auto& c : out.centroids) {
        Vec blend(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            blend[i] = static_cast<float>(alpha * double(c[i]) + (1.0 - alpha) * double(bg[i]));
        }
        if (!embedding::normalize(blend, 1e-9)) {
            throw std::runtime_error("unstable augmented centroid: near-zero blend");
        }
        c = std::move(blend);
    }
    return out;
}

double global_alpha(const corpus::Conversation& conv, const std::string& speaker_id,
                    std::size_t k_global) {
    if (k_global == 0) throw std::invalid_argument("k_global must be positive");
    const auto own = corpus::turns_by_speaker(conv.turns, speaker_id);
    return std::min(1.0, double(own.size()) / double(k_global));
}

}  // namespace parley::global_consistency
