#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace parley::topics {

// Probability vector over L topics; entries >= 0, sum 1 within 1e-9.
using TopicDistribution = std::vector<double>;

// Jensen-Shannon divergence, base 2, so the result lies in [0,1].
double jsd(const TopicDistribution& p, const TopicDistribution& q);

// Latent Dirichlet allocation fitted by collapsed Gibbs sampling with a
// fixed seed and iteration count. Inference for new text is a
// deterministic fold-in over the fitted word/topic statistics.
class LdaModel {
public:
    struct Config {
        std::uint32_t topics = 20;
        std::uint32_t iterations = 500;
        double alpha = 0.1;
        double beta = 0.01;
        std::uint64_t seed = 42;
    };

    static LdaModel fit(const std::vector<std::vector<std::string>>& docs, const Config& cfg);

    // Simplex over topics; throws ProviderError on an empty token list or
    // when the model has not been fitted.
    TopicDistribution infer(const std::vector<std::string>& tokens) const;

    std::uint32_t topics() const { return cfg_.topics; }
    bool fitted() const { return fitted_; }
    std::string model_id() const;

private:
    Config cfg_;
    bool fitted_ = false;
    std::unordered_map<std::string, std::uint32_t> vocab_;
    // p(topic | word), vocab-major
    std::vector<std::vector<double>> topic_given_word_;
};

}  // namespace parley::topics
