#include "parley/lm.hpp"

#include <cmath>

#include "parley/errors.hpp"
#include "parley/text.hpp"

namespace parley::lm {

namespace {

std::uint64_t pair_key(std::uint32_t prev, std::uint32_t next) {
    return (std::uint64_t(prev) << 32) | next;
}

}  // namespace

std::uint32_t BigramLm::token_id(const std::string& tok) const {
    auto it = vocab_.find(tok);
    return it == vocab_.end() ? unk_id() : it->second;
}

BigramLm BigramLm::fit(const std::vector<std::vector<std::string>>& turn_tokens) {
    BigramLm m;
    for (const auto& toks : turn_tokens) {
        for (const auto& t : toks) m.vocab_.emplace(t, std::uint32_t(m.vocab_.size()));
    }
    for (const auto& toks : turn_tokens) {
        if (toks.empty()) continue;
        std::uint32_t prev = m.start_id();
        for (const auto& t : toks) {
            const std::uint32_t id = m.token_id(t);
            ++m.bigram_[pair_key(prev, id)];
            ++m.context_total_[prev];
            prev = id;
        }
    }
    return m;
}

TokenLogProbs BigramLm::score(const std::vector<std::string>& context,
                              const std::string& text) const {
    const std::vector<std::string> toks = text::tokenize_folded(text);
    if (toks.empty()) throw ProviderError("cannot score zero-token text");

    std::uint32_t prev = start_id();
    for (const auto& ctx : context) {
        const auto ctoks = text::tokenize_folded(ctx);
        if (!ctoks.empty()) prev = token_id(ctoks.back());
    }

    const double v = double(vocab_size());
    TokenLogProbs out;
    out.logprobs.reserve(toks.size());
    for (const auto& t : toks) {
        const std::uint32_t id = token_id(t);
        auto big = bigram_.find(pair_key(prev, id));
        const double num = (big == bigram_.end() ? 0.0 : double(big->second)) + 1.0;
        auto tot = context_total_.find(prev);
        const double den = (tot == context_total_.end() ? 0.0 : double(tot->second)) + v;
        out.logprobs.push_back(std::log(num / den));
        prev = id;
    }
    return out;
}

std::string BigramLm::model_id() const {
    return "bigram-add1-V" + std::to_string(vocab_size());
}

UniformLm::UniformLm(std::size_t vocab) : vocab_(vocab) {
    if (vocab_ == 0) throw ProviderError("uniform LM needs a positive vocabulary");
}

TokenLogProbs UniformLm::score(const std::vector<std::string>& /*context*/,
                               const std::string& text) const {
    const std::vector<std::string> toks = text::tokenize_folded(text);
    if (toks.empty()) throw ProviderError("cannot score zero-token text");
    TokenLogProbs out;
    out.logprobs.assign(toks.size(), std::log(1.0 / double(vocab_)));
    return out;
}

std::string UniformLm::model_id() const { return "uniform-V" + std::to_string(vocab_); }

}  // namespace parley::lm
