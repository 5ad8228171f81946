#include "parley/topic_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "parley/errors.hpp"

namespace parley::topics {

namespace {

double entropy2(const TopicDistribution& p) {
    double h = 0.0;
    for (const double x : p) {
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

}  // namespace

double jsd(const TopicDistribution& p, const TopicDistribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("JSD over mismatched supports");
    TopicDistribution m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    double v = entropy2(m) - 0.5 * (entropy2(p) + entropy2(q));
    if (v < 0.0) v = 0.0;  // guard tiny negative round-off
    if (v > 1.0) v = 1.0;
    return v;
}

LdaModel LdaModel::fit(const std::vector<std::vector<std::string>>& docs, const Config& cfg) {
    LdaModel m;
    m.cfg_ = cfg;
    if (cfg.topics == 0) throw std::invalid_argument("LDA needs at least one topic");

    // vocabulary in first-appearance order keeps ids deterministic
    std::vector<std::vector<std::uint32_t>> ids(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& w : docs[d]) {
            auto [it, ins] = m.vocab_.emplace(w, std::uint32_t(m.vocab_.size()));
            ids[d].push_back(it->second);
        }
    }
    const std::size_t V = m.vocab_.size();
    const std::uint32_t K = cfg.topics;
    if (V == 0) {
        // degenerate corpus: uniform model
        m.fitted_ = true;
        return m;
    }

    std::vector<std::vector<std::uint32_t>> z(docs.size());
    std::vector<std::vector<std::uint32_t>> ndk(docs.size(), std::vector<std::uint32_t>(K, 0));
    std::vector<std::vector<std::uint32_t>> nkw(K, std::vector<std::uint32_t>(V, 0));
    std::vector<std::uint32_t> nk(K, 0);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::uint32_t> init_topic(0, K - 1);
    for (std::size_t d = 0; d < ids.size(); ++d) {
        z[d].resize(ids[d].size());
        for (std::size_t i = 0; i < ids[d].size(); ++i) {
            const std::uint32_t t = init_topic(rng);
            z[d][i] = t;
            ++ndk[d][t];
            ++nkw[t][ids[d][i]];
            ++nk[t];
        }
    }

    std::vector<double> weights(K);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double vb = double(V) * cfg.beta;
    for (std::uint32_t iter = 0; iter < cfg.iterations; ++iter) {
        for (std::size_t d = 0; d < ids.size(); ++d) {
            for (std::size_t i = 0; i < ids[d].size(); ++i) {
                const std::uint32_t w = ids[d][i];
                const std::uint32_t old = z[d][i];
                --ndk[d][old];
                --nkw[old][w];
                --nk[old];
                double total = 0.0;
                for (std::uint32_t k = 0; k < K; ++k) {
                    const double p = (double(ndk[d][k]) + cfg.alpha) *
                                     (double(nkw[k][w]) + cfg.beta) / (double(nk[k]) + vb);
                    total += p;
                    weights[k] = total;
                }
                const double u = unif(rng) * total;
                std::uint32_t pick = K - 1;
                for (std::uint32_t k = 0; k < K; ++k) {
                    if (u < weights[k]) {
                        pick = k;
                        break;
                    }
                }
                z[d][i] = pick;
                ++ndk[d][pick];
                ++nkw[pick][w];
                ++nk[pick];
            }
        }
    }

    // p(topic | word) from the final counts
    m.topic_given_word_.assign(V, std::vector<double>(K, 0.0));
    for (std::uint32_t w = 0; w < V; ++w) {
        double total = 0.0;
        for (std::uint32_t k = 0; k < K; ++k) {
            const double phi = (double(nkw[k][w]) + cfg.beta) / (double(nk[k]) + vb);
            m.topic_given_word_[w][k] = phi;
            total += phi;
        }
        for (std::uint32_t k = 0; k < K; ++k) m.topic_given_word_[w][k] /= total;
    }
    m.fitted_ = true;
    return m;
}

TopicDistribution LdaModel::infer(const std::vector<std::string>& tokens) const {
    if (!fitted_) throw ProviderError("topic model not fitted");
    if (tokens.empty()) throw ProviderError("topic inference over empty token list");
    const std::uint32_t K = cfg_.topics;
    // prior-free fold-in: proportionally identical token multisets map to
    // the same distribution regardless of length
    TopicDistribution acc(K, 0.0);
    for (const auto& t : tokens) {
        auto it = vocab_.find(t);
        if (it == vocab_.end()) {
            for (std::uint32_t k = 0; k < K; ++k) acc[k] += 1.0 / double(K);
        } else {
            const auto& pw = topic_given_word_[it->second];
            for (std::uint32_t k = 0; k < K; ++k) acc[k] += pw[k];
        }
    }
    double total = 0.0;
    for (const double x : acc) total += x;
    for (auto& x : acc) x /= total;
    return acc;
}

std::string LdaModel::model_id() const {
    return "lda-gibbs-L" + std::to_string(cfg_.topics) + "-it" + std::to_string(cfg_.iterations) +
           "-seed" + std::to_string(cfg_.seed);
}

}  // namespace parley::topics
