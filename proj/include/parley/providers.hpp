#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parley/acts.hpp"
#include "parley/corpus.hpp"
#include "parley/embedding.hpp"
#include "parley/idf.hpp"
#include "parley/lm.hpp"
#include "parley/topic_model.hpp"

namespace parley::providers {

struct ProviderConfig {
    enum class Kind { baseline, remote };

    Kind kind = Kind::baseline;
    std::string endpoint;      // remote host, e.g. http://127.0.0.1:8900
    std::string cache_path;    // embedding cache file; empty = memory only
    std::uint64_t seed = 42;
    std::uint32_t embedding_dim = 256;
    std::uint32_t topics = 20;  // L
    std::uint32_t lda_iterations = 500;
    embedding::ClampMode clamp = embedding::ClampMode::zero;
    // uniform-unigram LM with this vocabulary instead of the fitted bigram
    // model; analytic baseline used by tests and smoke runs
    std::optional<std::size_t> uniform_lm_vocab;
};

class TopicProvider {
public:
    virtual ~TopicProvider() = default;
    virtual topics::TopicDistribution distribution(const std::vector<std::string>& tokens) = 0;
    virtual std::uint32_t topic_count() const = 0;
    virtual std::string model_id() const = 0;
};

class ActProvider {
public:
    virtual ~ActProvider() = default;
    virtual acts::DialogueAct tag(const std::string& text,
                                  std::optional<acts::DialogueAct> previous) = 0;
    virtual std::string model_id() const = 0;
};

// The four semantic oracles plus the dataset-level IDF table. Everything
// here is deterministic under a fixed config and safe to share across
// concurrent workers.
class ProviderBundle {
public:
    static ProviderBundle build(const corpus::Dataset& fit_on, const ProviderConfig& cfg);

    embedding::Embedder& embedder() const { return *embedder_; }
    TopicProvider& topics() const { return *topics_; }
    ActProvider& acts() const { return *acts_; }
    const lm::LanguageModel& language_model() const { return *lm_; }
    const acts::ActTransitionModel& transitions() const { return transitions_; }
    const IdfTable& idf() const { return idf_; }
    const ProviderConfig& config() const { return config_; }

    double sim(const embedding::Vec& a, const embedding::Vec& b) const {
        return embedding::similarity(a, b, config_.clamp);
    }

    embedding::Vec embed(const std::string& text) const { return embedder_->embed_one(text); }
    std::vector<embedding::Vec> embed_turns(const std::vector<corpus::Turn>& turns) const;

    // deterministic act labels for a turn sequence (previous-act feedback)
    std::vector<acts::DialogueAct> tag_sequence(const std::vector<corpus::Turn>& turns) const;

    // topic distribution of the concatenated content tokens of a turn set;
    // nullopt when no content tokens survive filtering
    std::optional<topics::TopicDistribution> turns_topics(
        const std::vector<corpus::Turn>& turns) const;
    std::optional<topics::TopicDistribution> text_topics(const std::string& text) const;

    // model identifiers for report fingerprinting
    std::vector<std::pair<std::string, std::string>> model_identifiers() const;

private:
    std::shared_ptr<embedding::Embedder> embedder_;
    std::shared_ptr<TopicProvider> topics_;
    std::shared_ptr<ActProvider> acts_;
    std::shared_ptr<lm::LanguageModel> lm_;
    acts::ActTransitionModel transitions_;
    IdfTable idf_;
    ProviderConfig config_;
};

// Remote provider clients speaking the JSON wire protocol:
//   request  {"op": "embed"|"logprobs"|"topics"|"acts", "inputs": [...], "model": str}
//   response {"outputs": [...], "model": str, "dim"?: int}
// POSTed to <endpoint>/oracle. Transport failures are retried twice and
// then surfaced as ProviderError.
std::shared_ptr<embedding::Embedder> make_remote_embedder(const std::string& endpoint,
                                                          const std::string& model);
std::shared_ptr<TopicProvider> make_remote_topics(const std::string& endpoint,
                                                  const std::string& model,
                                                  std::uint32_t topic_count);
std::shared_ptr<ActProvider> make_remote_acts(const std::string& endpoint,
                                              const std::string& model);
std::shared_ptr<lm::LanguageModel> make_remote_lm(const std::string& endpoint,
                                                  const std::string& model);

// connectivity check for `providers ping`
bool remote_reachable(const std::string& endpoint, std::string* error = nullptr);

}  // namespace parley::providers
