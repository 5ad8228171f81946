#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace parley::lm {

// Per-token conditional log-probabilities for a scored text. Every entry
// is <= 0 and there is at least one token.
struct TokenLogProbs {
    std::vector<double> logprobs;
    std::size_t token_count() const { return logprobs.size(); }
};

class LanguageModel {
public:
    virtual ~LanguageModel() = default;
    // context: preceding turn texts, oldest first. Throws ProviderError
    // when text tokenizes to zero tokens.
    virtual TokenLogProbs score(const std::vector<std::string>& context,
                                const std::string& text) const = 0;
    virtual std::string model_id() const = 0;
};

// Additive-smoothed (alpha = 1) bigram model over casefolded word tokens,
// fitted on per-turn documents of the evaluation dataset. Unseen tokens
// map to a single unknown id; sentence starts condition on a start marker.
class BigramLm final : public LanguageModel {
public:
    static BigramLm fit(const std::vector<std::vector<std::string>>& turn_tokens);

    TokenLogProbs score(const std::vector<std::string>& context,
                        const std::string& text) const override;
    std::string model_id() const override;

    std::size_t vocab_size() const { return vocab_.size() + 1; }  // + unknown

private:
    std::unordered_map<std::string, std::uint32_t> vocab_;
    // context id -> (next id -> count); context ids: 0..V-1 tokens, V = unk, V+1 = start
    std::unordered_map<std::uint64_t, std::uint64_t> bigram_;
    std::unordered_map<std::uint32_t, std::uint64_t> context_total_;

    std::uint32_t unk_id() const { return std::uint32_t(vocab_.size()); }
    std::uint32_t start_id() const { return std::uint32_t(vocab_.size()) + 1; }
    std::uint32_t token_id(const std::string& tok) const;
};

// Analytic baseline: every token gets log(1/vocab) regardless of content.
class UniformLm final : public LanguageModel {
public:
    explicit UniformLm(std::size_t vocab);
    TokenLogProbs score(const std::vector<std::string>& context,
                        const std::string& text) const override;
    std::string model_id() const override;

private:
    std::size_t vocab_;
};

}  // namespace parley::lm
