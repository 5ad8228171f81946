#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parley::acts {

// Fixed taxonomy. The rule tagger never emits prompt on its own, but the
// label participates in every smoothed distribution.
enum class DialogueAct : std::uint8_t {
    question = 0,
    answer = 1,
    request = 2,
    acknowledgment = 3,
    statement = 4,
    prompt = 5,
};

inline constexpr std::size_t kActCount = 6;

std::string_view act_name(DialogueAct a);
std::optional<DialogueAct> act_from_name(std::string_view name);

// Ordered rule list: interrogatives -> question; imperative lead verb ->
// request; acknowledgment lexicon -> acknowledgment; previous act question
// -> answer; else statement.
DialogueAct tag_act(std::string_view utterance, std::optional<DialogueAct> previous);

// Additive-smoothed (alpha = 1) bigram over act labels, estimated from the
// evaluation dataset itself. Rows sum to 1 over the taxonomy.
class ActTransitionModel {
public:
    ActTransitionModel();

    void observe_sequence(const std::vector<DialogueAct>& acts);

    // p(next | last act of history); empty history backs off to the
    // unigram prior.
    double transition_prob(const std::vector<DialogueAct>& history, DialogueAct next) const;
    double prior(DialogueAct a) const;

private:
    std::array<std::array<std::uint64_t, kActCount>, kActCount> bigram_{};
    std::array<std::uint64_t, kActCount> unigram_{};
    std::uint64_t total_ = 0;
};

}  // namespace parley::acts
