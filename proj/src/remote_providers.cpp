// Remote-oracle clients over the JSON request/response protocol.

#include <json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>

#include "parley/errors.hpp"
#include "parley/providers.hpp"
#include "parley/text.hpp"

namespace parley::providers {

using nlohmann::json;

namespace {

constexpr int kRetries = 2;

json post_oracle(const std::string& endpoint, const json& request) {
    std::string last_error;
    for (int attempt = 0; attempt <= kRetries; ++attempt) {
        httplib::Client client(endpoint);
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(30, 0);
        auto res = client.Post("/oracle", request.dump(), "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "status " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            last_error = std::string("bad response body: ") + e.what();
        }
    }
    throw ProviderError("remote provider failed after " + std::to_string(kRetries + 1) +
                        " attempts: " + last_error);
}

class RemoteEmbedder final : public embedding::Embedder {
public:
    RemoteEmbedder(std::string endpoint, std::string model)
        : endpoint_(std::move(endpoint)), model_(std::move(model)) {}

    std::vector<embedding::Vec> embed(std::span<const std::string> texts) override {
        json req{{"op", "embed"}, {"inputs", json::array()}, {"model", model_}};
        for (const auto& t : texts) req["inputs"].push_back(t);
        const json res = post_oracle(endpoint_, req);
        if (!res.contains("outputs") || !res["outputs"].is_array() ||
            res["outputs"].size() != texts.size()) {
            throw ProviderError("remote embed returned wrong output count");
        }
        std::vector<embedding::Vec> out;
        out.reserve(texts.size());
        for (const auto& jv : res["outputs"]) {
            embedding::Vec v;
            v.reserve(jv.size());
            for (const auto& x : jv) v.push_back(x.get<float>());
            if (dim_ == 0) dim_ = std::uint32_t(v.size());
            if (v.size() != dim_) throw ProviderError("remote embed dimension drift");
            embedding::normalize(v);
            out.push_back(std::move(v));
        }
        if (res.contains("dim")) dim_ = res["dim"].get<std::uint32_t>();
        if (res.contains("model")) model_ = res["model"].get<std::string>();
        return out;
    }

    std::uint32_t dim() const override { return dim_ == 0 ? 1 : dim_; }
    std::string model_id() const override { return model_; }

private:
    std::string endpoint_;
    std::string model_;
    std::uint32_t dim_ = 0;
};

class RemoteTopics final : public TopicProvider {
public:
    RemoteTopics(std::string endpoint, std::string model, std::uint32_t topic_count)
        : endpoint_(std::move(endpoint)), model_(std::move(model)), topics_(topic_count) {}

    topics::TopicDistribution distribution(const std::vector<std::string>& tokens) override {
        if (tokens.empty()) throw ProviderError("topic inference over empty token list");
        std::string joined;
        for (const auto& t : tokens) {
            if (!joined.empty()) joined += ' ';
            joined += t;
        }
        json req{{"op", "topics"}, {"inputs", json::array({joined})}, {"model", model_}};
        const json res = post_oracle(endpoint_, req);
        const auto& out = res.at("outputs").at(0);
        topics::TopicDistribution d;
        for (const auto& x : out) d.push_back(x.get<double>());
        if (d.size() != topics_) throw ProviderError("remote topics wrong distribution length");
        double total = 0.0;
        for (const auto x : d) {
            if (x < 0.0) throw ProviderError("remote topics negative probability");
            total += x;
        }
        if (std::abs(total - 1.0) > 1e-6) throw ProviderError("remote topics not a simplex");
        for (auto& x : d) x /= total;
        return d;
    }

    std::uint32_t topic_count() const override { return topics_; }
    std::string model_id() const override { return model_; }

private:
    std::string endpoint_;
    std::string model_;
    std::uint32_t topics_;
};

class RemoteActs final : public ActProvider {
public:
    RemoteActs(std::string endpoint, std::string model)
        : endpoint_(std::move(endpoint)), model_(std::move(model)) {}

    acts::DialogueAct tag(const std::string& text,
                          std::optional<acts::DialogueAct> previous) override {
        json req{{"op", "acts"}, {"inputs", json::array({text})}, {"model", model_}};
        if (previous) req["previous"] = std::string(acts::act_name(*previous));
        const json res = post_oracle(endpoint_, req);
        const std::string label = res.at("outputs").at(0).get<std::string>();
        const auto act = acts::act_from_name(label);
        if (!act) throw ProviderError("remote acts returned unknown label: " + label);
        return *act;
    }

    std::string model_id() const override { return model_; }

private:
    std::string endpoint_;
    std::string model_;
};

class RemoteLm final : public lm::LanguageModel {
public:
    RemoteLm(std::string endpoint, std::string model)
        : endpoint_(std::move(endpoint)), model_(std::move(model)) {}

    lm::TokenLogProbs score(const std::vector<std::string>& context,
                            const std::string& text) const override {
        json input{{"context", context}, {"text", text}};
        json req{{"op", "logprobs"}, {"inputs", json::array({input})}, {"model", model_}};
        const json res = post_oracle(endpoint_, req);
        lm::TokenLogProbs out;
        for (const auto& x : res.at("outputs").at(0)) {
            const double lp = x.get<double>();
            if (lp > 0.0) throw ProviderError("remote lm returned positive logprob");
            out.logprobs.push_back(lp);
        }
        if (out.logprobs.empty()) throw ProviderError("remote lm returned zero tokens");
        return out;
    }

    std::string model_id() const override { return model_; }

private:
    std::string endpoint_;
    std::string model_;
};

}  // namespace

std::shared_ptr<embedding::Embedder> make_remote_embedder(const std::string& endpoint,
                                                          const std::string& model) {
    return std::make_shared<RemoteEmbedder>(endpoint, model);
}

std::shared_ptr<TopicProvider> make_remote_topics(const std::string& endpoint,
                                                  const std::string& model,
                                                  std::uint32_t topic_count) {
    return std::make_shared<RemoteTopics>(endpoint, model, topic_count);
}

std::shared_ptr<ActProvider> make_remote_acts(const std::string& endpoint,
                                              const std::string& model) {
    return std::make_shared<RemoteActs>(endpoint, model);
}

std::shared_ptr<lm::LanguageModel> make_remote_lm(const std::string& endpoint,
                                                  const std::string& model) {
    return std::make_shared<RemoteLm>(endpoint, model);
}

bool remote_reachable(const std::string& endpoint, std::string* error) {
    try {
        json req{{"op", "embed"}, {"inputs", json::array({"ping"})}, {"model", "ping"}};
        post_oracle(endpoint, req);
        return true;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return false;
    }
}

}  // namespace parley::providers
