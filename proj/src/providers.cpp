#include "parley/providers.hpp"

#include <json.hpp>

#include "parley/errors.hpp"
#include "parley/text.hpp"

namespace parley::providers {

using nlohmann::json;

namespace {

class BaselineTopics final : public TopicProvider {
public:
    explicit BaselineTopics(topics::LdaModel model) : model_(std::move(model)) {}

    topics::TopicDistribution distribution(const std::vector<std::string>& tokens) override {
        return model_.infer(tokens);
    }
    std::uint32_t topic_count() const override { return model_.topics(); }
    std::string model_id() const override { return model_.model_id(); }

private:
    topics::LdaModel model_;
};

class BaselineActs final : public ActProvider {
public:
    acts::DialogueAct tag(const std::string& text,
                          std::optional<acts::DialogueAct> previous) override {
        return acts::tag_act(text, previous);
    }
    std::string model_id() const override { return "act-rules-v1"; }
};

}  // namespace

ProviderBundle ProviderBundle::build(const corpus::Dataset& fit_on, const ProviderConfig& cfg) {
    ProviderBundle b;
    b.config_ = cfg;

    std::shared_ptr<embedding::Embedder> base;
    if (cfg.kind == ProviderConfig::Kind::remote) {
        base = make_remote_embedder(cfg.endpoint, "remote-embedding");
        b.topics_ = make_remote_topics(cfg.endpoint, "remote-topics", cfg.topics);
        b.acts_ = make_remote_acts(cfg.endpoint, "remote-acts");
        b.lm_ = make_remote_lm(cfg.endpoint, "remote-lm");
    } else {
        base = std::make_shared<embedding::HashEmbedder>(cfg.embedding_dim, cfg.seed);

        std::vector<std::vector<std::string>> docs;
        for (const auto& conv : fit_on.conversations) {
            for (const auto& turn : conv.turns) {
                auto toks = text::content_tokens(turn.text);
                if (!toks.empty()) docs.push_back(std::move(toks));
            }
        }
        topics::LdaModel::Config lda;
        lda.topics = cfg.topics;
        lda.iterations = cfg.lda_iterations;
        lda.seed = cfg.seed;
        b.topics_ = std::make_shared<BaselineTopics>(topics::LdaModel::fit(docs, lda));

        b.acts_ = std::make_shared<BaselineActs>();

        if (cfg.uniform_lm_vocab) {
            b.lm_ = std::make_shared<lm::UniformLm>(*cfg.uniform_lm_vocab);
        } else {
            std::vector<std::vector<std::string>> turn_tokens;
            for (const auto& conv : fit_on.conversations) {
                for (const auto& turn : conv.turns) {
                    turn_tokens.push_back(text::tokenize_folded(turn.text));
                }
            }
            b.lm_ = std::make_shared<lm::BigramLm>(lm::BigramLm::fit(turn_tokens));
        }
    }
    b.embedder_ = std::make_shared<embedding::CachedEmbedder>(std::move(base), cfg.cache_path);

    // the act-transition bigram is always estimated locally, over labels
    // produced by whichever tagger is configured
    for (const auto& conv : fit_on.conversations) {
        b.transitions_.observe_sequence(b.tag_sequence(conv.turns));
    }
    b.idf_ = IdfTable::build(fit_on);
    return b;
}

std::vector<embedding::Vec> ProviderBundle::embed_turns(
    const std::vector<corpus::Turn>& turns) const {
    std::vector<std::string> texts;
    texts.reserve(turns.size());
    for (const auto& t : turns) texts.push_back(t.text);
    return embedder_->embed(texts);
}

std::vector<acts::DialogueAct> ProviderBundle::tag_sequence(
    const std::vector<corpus::Turn>& turns) const {
    std::vector<acts::DialogueAct> out;
    out.reserve(turns.size());
    std::optional<acts::DialogueAct> prev;
    for (const auto& t : turns) {
        const auto a = acts_->tag(t.text, prev);
        out.push_back(a);
        prev = a;
    }
    return out;
}

std::optional<topics::TopicDistribution> ProviderBundle::turns_topics(
    const std::vector<corpus::Turn>& turns) const {
    std::vector<std::string> tokens;
    for (const auto& t : turns) {
        for (auto& tok : text::content_tokens(t.text)) tokens.push_back(std::move(tok));
    }
    if (tokens.empty()) return std::nullopt;
    return topics_->distribution(tokens);
}

std::optional<topics::TopicDistribution> ProviderBundle::text_topics(
    const std::string& text_in) const {
    auto tokens = text::content_tokens(text_in);
    if (tokens.empty()) return std::nullopt;
    return topics_->distribution(tokens);
}

std::vector<std::pair<std::string, std::string>> ProviderBundle::model_identifiers() const {
    return {
        {"embedding", embedder_->model_id()},
        {"topics", topics_->model_id()},
        {"acts", acts_->model_id()},
        {"lm", lm_->model_id()},
    };
}

}  // namespace parley::providers
