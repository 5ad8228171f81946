#include "parley/acts.hpp"

#include <unordered_set>

#include "parley/text.hpp"

namespace parley::acts {

std::string_view act_name(DialogueAct a) {
    switch (a) {
        case DialogueAct::question: return "question";
        case DialogueAct::answer: return "answer";
        case DialogueAct::request: return "request";
        case DialogueAct::acknowledgment: return "acknowledgment";
        case DialogueAct::statement: return "statement";
        case DialogueAct::prompt: return "prompt";
    }
    return "statement";
}

std::optional<DialogueAct> act_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kActCount; ++i) {
        const auto a = static_cast<DialogueAct>(i);
        if (act_name(a) == name) return a;
    }
    return std::nullopt;
}

namespace {

const std::unordered_set<std::string>& interrogative_leads() {
    static const std::unordered_set<std::string> kSet = {
        "what", "who",  "whom", "whose", "which", "where", "when", "why",
        "how",  "is",   "are",  "was",   "were",  "do",    "does", "did",
        "can",  "could", "would", "will", "shall", "should", "may", "might",
        "am",   "have", "has",  "anyone", "any",
    };
    return kSet;
}

const std::unordered_set<std::string>& request_leads() {
    static const std::unordered_set<std::string> kSet = {
        "please", "let",    "make",  "send",  "give",  "check", "update",
        "review", "add",    "remove", "fix",  "try",   "start", "stop",
        "run",    "write",  "share", "provide", "consider", "take", "look",
        "ping",   "schedule", "prepare",
    };
    return kSet;
}

const std::unordered_set<std::string>& ack_leads() {
    static const std::unordered_set<std::string> kSet = {
        "ok",     "okay", "thanks", "thank", "sure",  "yes",  "yeah", "yep",
        "agreed", "right", "understood", "noted", "great", "cool", "nice",
        "lgtm",   "done", "sounds", "got", "perfect",
    };
    return kSet;
}

}  // namespace

DialogueAct tag_act(std::string_view utterance, std::optional<DialogueAct> previous) {
    const std::string_view trimmed = parley::text::trim(utterance);
    const bool question_mark =
        !trimmed.empty() &&
        (trimmed.back() == '?' ||
         (trimmed.size() >= 3 && trimmed.substr(trimmed.size() - 3) == "\xEF\xBC\x9F"));
    const std::vector<std::string> toks = parley::text::tokenize_folded(trimmed);
    const std::string lead = toks.empty() ? std::string() : toks.front();

    if (question_mark || interrogative_leads().count(lead)) return DialogueAct::question;
    if (request_leads().count(lead)) return DialogueAct::request;
    if (ack_leads().count(lead)) return DialogueAct::acknowledgment;
    if (previous && *previous == DialogueAct::question) return DialogueAct::answer;
    return DialogueAct::statement;
}

ActTransitionModel::ActTransitionModel() = default;

void ActTransitionModel::observe_sequence(const std::vector<DialogueAct>& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        ++unigram_[static_cast<std::size_t>(seq[i])];
        ++total_;
        if (i > 0) {
            ++bigram_[static_cast<std::size_t>(seq[i - 1])][static_cast<std::size_t>(seq[i])];
        }
    }
}

double ActTransitionModel::prior(DialogueAct a) const {
    return (double(unigram_[static_cast<std::size_t>(a)]) + 1.0) /
           (double(total_) + double(kActCount));
}

double ActTransitionModel::transition_prob(const std::vector<DialogueAct>& history,
                                           DialogueAct next) const {
    if (history.empty()) return prior(next);
    const auto prev = static_cast<std::size_t>(history.back());
    std::uint64_t row_total = 0;
    for (const auto c : bigram_[prev]) row_total += c;
    return (double(bigram_[prev][static_cast<std::size_t>(next)]) + 1.0) /
           (double(row_total) + double(kActCount));
}

}  // namespace parley::acts
