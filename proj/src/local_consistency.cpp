#include "parley/local_consistency.hpp"

#include <algorithm>

namespace parley::local_consistency {

using embedding::Vec;

std::optional<double> lscc_es(const std::string& candidate_text, const std::string& predicted,
                              const corpus::ContextWindow& window, Mode mode,
                              const providers::ProviderBundle& bundle) {
    const auto own = corpus::turns_by_speaker(window.turns, predicted);
    if (own.empty()) return std::nullopt;
    const Vec cand = bundle.embed(candidate_text);
    const auto own_vecs = bundle.embed_turns(own);

    double sum = 0.0;
    double mx = 0.0;
    double mn = 1.0;
    bool first = true;
    for (const auto& v : own_vecs) {
        const double s = bundle.sim(cand, v);
        sum += s;
        if (first) {
            mx = mn = s;
            first = false;
        } else {
            mx = std::max(mx, s);
            mn = std::min(mn, s);
        }
    }
    switch (mode) {
        case Mode::avg: return sum / double(own_vecs.size());
        case Mode::max: return mx;
        case Mode::min: return mn;
    }
    return std::nullopt;
}

double lscc_es_aug(const std::string& candidate_text, const std::string& predicted,
                   const corpus::ContextWindow& window,
                   const providers::ProviderBundle& bundle,
                   const corpus::SpeakerProfile* profile) {
    const auto rep = local_speaker::augmented_rep(predicted, window, bundle, profile);
    return bundle.sim(bundle.embed(candidate_text), rep.vector);
}

}  // namespace parley::local_consistency
