#include "parley/local_speaker.hpp"

#include <cmath>
#include <stdexcept>

#include "parley/text.hpp"

namespace parley::local_speaker {

using corpus::ContextWindow;
using embedding::Vec;

double DecaySpec::operator()(std::size_t d) const {
    switch (kind) {
        case Kind::geometric:
            return parameter * std::pow(1.0 - parameter, double(d));
        case Kind::exponential:
            return std::exp(-parameter * double(d));
        case Kind::inverse:
            return 1.0 / (1.0 + double(d));
    }
    return 0.0;
}

namespace {

// does `haystack_tokens` contain `needle_tokens` as a consecutive run?
bool contains_phrase(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (haystack[i + j] != needle[j]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

// names referenced via '@'; "@bob," yields "bob"
std::vector<std::string> mention_tokens(std::string_view text_in) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text_in.size(); ++i) {
        if (text_in[i] != '@') continue;
        std::size_t j = i + 1;
        while (j < text_in.size()) {
            const char c = text_in[j];
            const bool name_char = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                                   c == '.' || c == '-';
            if (!name_char) break;
            ++j;
        }
        if (j > i + 1) out.push_back(text::casefold(text_in.substr(i + 1, j - i - 1)));
        i = j - 1;
    }
    return out;
}

}  // namespace

int dnr(const std::string& predicted, const ContextWindow& window, bool plain_name_match) {
    const std::string folded = text::casefold(predicted);
    const std::vector<std::string> name_tokens = text::tokenize_folded(predicted);
    for (const auto& turn : window.turns) {
        for (const auto& m : mention_tokens(turn.text)) {
            if (m == folded) return 1;
        }
        if (plain_name_match && !name_tokens.empty()) {
            if (contains_phrase(text::tokenize_folded(turn.text), name_tokens)) return 1;
        }
    }
    return 0;
}

double ir(const std::string& predicted, const ContextWindow& window, const DecaySpec& decay) {
    const std::size_t n = window.turns.size();
    if (n == 0) throw std::invalid_argument("ir over empty window");
    // position i counts back from the newest turn (i = 1). The speaker's
    // most recent participation is the one that counts; a speaker whose
    // latest turn is position 1 just spoke and scores 0.
    for (std::size_t i = 1; i <= n; ++i) {
        if (window.turns[n - i].speaker_id == predicted) {
            return i == 1 ? 0.0 : decay(i - 2);
        }
    }
    return 0.0;
}

double pf(const std::string& predicted, const ContextWindow& window) {
    if (window.k == 0) throw std::invalid_argument("pf needs positive k");
    std::size_t count = 0;
    for (const auto& t : window.turns) {
        if (t.speaker_id == predicted) ++count;
    }
    return double(count) / double(window.k);
}

AugmentedSpeakerRep augmented_rep(const std::string& speaker_id, const ContextWindow& window,
                                  const providers::ProviderBundle& bundle,
                                  const corpus::SpeakerProfile* profile) {
    const auto own = corpus::turns_by_speaker(window.turns, speaker_id);
    const bool has_background = profile && profile->background_text &&
                                !text::trim(*profile->background_text).empty();
    if (own.empty() && !has_background) {
        throw std::invalid_argument("augmented_rep: no speaker turns and no background");
    }

    AugmentedSpeakerRep rep;
    rep.source_turns = own.size();
    rep.alpha = std::min(1.0, double(own.size()) / double(window.k));

    Vec blend;
    if (!own.empty()) {
        const auto vecs = bundle.embed_turns(own);
        Vec centroid = embedding::mean_vector(vecs);
        blend.assign(centroid.size(), 0.0f);
        for (std::size_t i = 0; i < centroid.size(); ++i) {
            blend[i] = static_cast<float>(rep.alpha * centroid[i]);
        }
    }
    if (has_background && rep.alpha < 1.0) {
        const Vec bg = bundle.embed(*profile->background_text);
        if (blend.empty()) blend.assign(bg.size(), 0.0f);
        for (std::size_t i = 0; i < bg.size(); ++i) {
            blend[i] += static_cast<float>((1.0 - rep.alpha) * bg[i]);
        }
    }
    if (!embedding::normalize(blend)) {
        throw std::invalid_argument("augmented_rep: degenerate near-zero blend");
    }
    rep.vector = std::move(blend);
    return rep;
}

std::optional<double> ls_es(const std::string& predicted, const ContextWindow& window,
                            EsMode mode, const providers::ProviderBundle& bundle,
                            const corpus::SpeakerProfile* profile) {
    const auto own = corpus::turns_by_speaker(window.turns, predicted);
    const auto others = corpus::turns_not_by_speaker(window.turns, predicted);
    if (others.empty()) return std::nullopt;  // avg over an empty complement

    std::vector<double> per_context;
    const auto other_vecs = bundle.embed_turns(others);
    if (!own.empty()) {
        const auto own_vecs = bundle.embed_turns(own);
        for (const auto& c : other_vecs) {
            double best = 0.0;
            bool first = true;
            for (const auto& o : own_vecs) {
                const double s = bundle.sim(c, o);
                if (first || s > best) {
                    best = s;
                    first = false;
                }
            }
            per_context.push_back(best);
        }
    } else {
        const bool has_background = profile && profile->background_text &&
                                    !text::trim(*profile->background_text).empty();
        if (!has_background) return std::nullopt;
        const AugmentedSpeakerRep rep = augmented_rep(predicted, window, bundle, profile);
        for (const auto& c : other_vecs) per_context.push_back(bundle.sim(c, rep.vector));
    }

    if (mode == EsMode::max) {
        double best = 0.0;
        for (const double s : per_context) best = std::max(best, s);
        return best;
    }
    double sum = 0.0;
    for (const double s : per_context) sum += s;
    return sum / double(per_context.size());
}

std::optional<double> ls_ta(const std::string& predicted, const ContextWindow& window,
                            const providers::ProviderBundle& bundle) {
    const auto own = corpus::turns_by_speaker(window.turns, predicted);
    if (own.empty()) return std::nullopt;
    const auto speaker_topics = bundle.turns_topics(own);
    const auto window_topics = bundle.turns_topics(window.turns);
    if (!speaker_topics || !window_topics) return std::nullopt;
    return 1.0 - std::sqrt(topics::jsd(*speaker_topics, *window_topics));
}

}  // namespace parley::local_speaker
