#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "parley/corpus.hpp"
#include "parley/providers.hpp"
#include "parley/report.hpp"

namespace test_helpers {

using parley::corpus::Conversation;
using parley::corpus::Dataset;
using parley::corpus::Turn;

inline Conversation make_conversation(const std::vector<std::pair<std::string, std::string>>& turns,
                                      const std::string& id = "conv") {
    Conversation conv;
    conv.id = id;
    std::size_t idx = 0;
    for (const auto& [speaker, text] : turns) {
        Turn t;
        t.index = idx++;
        t.speaker_id = speaker;
        t.text = text;
        conv.participants.insert(speaker);
        conv.turns.push_back(std::move(t));
    }
    return conv;
}

inline Dataset make_dataset(const std::vector<Conversation>& convs,
                            const std::string& label = "test") {
    Dataset ds;
    ds.source_label = label;
    ds.conversations = convs;
    return ds;
}

// fast provider config for unit tests: tiny LDA, fixed seed
inline parley::providers::ProviderConfig quick_provider_config(std::uint32_t topics = 4,
                                                               std::uint32_t iters = 60) {
    parley::providers::ProviderConfig cfg;
    cfg.topics = topics;
    cfg.lda_iterations = iters;
    cfg.seed = 42;
    return cfg;
}

inline parley::providers::ProviderBundle quick_bundle(const Dataset& ds) {
    return parley::providers::ProviderBundle::build(ds, quick_provider_config());
}

// two unit vectors in the plane with a prescribed cosine
inline std::pair<parley::embedding::Vec, parley::embedding::Vec> vectors_with_cosine(
    double cosine, std::size_t dim = 4) {
    parley::embedding::Vec a(dim, 0.0f), b(dim, 0.0f);
    a[0] = 1.0f;
    b[0] = static_cast<float>(cosine);
    b[1] = static_cast<float>(std::sqrt(std::max(0.0, 1.0 - cosine * cosine)));
    return {a, b};
}

inline parley::embedding::Vec random_unit_vec(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    parley::embedding::Vec v(dim);
    for (auto& x : v) x = static_cast<float>(gauss(rng));
    parley::embedding::normalize(v);
    return v;
}

// positive-orthant unit vector: pairwise cosines stay in (0, 1), so the
// clamp never creates distance ties and MSTs are unique a.s.
inline parley::embedding::Vec random_positive_unit_vec(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    parley::embedding::Vec v(dim);
    for (auto& x : v) x = static_cast<float>(unif(rng));
    parley::embedding::normalize(v);
    return v;
}

// All spanning trees of the complete graph on n vertices via Pruefer
// sequences; independent oracle for the MST kernels (n <= 7 or so).
struct SpanningTreeOracle {
    double best_total = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> best_edges;
};

inline std::vector<std::pair<std::size_t, std::size_t>> tree_from_pruefer(
    const std::vector<std::size_t>& seq, std::size_t n) {
    std::vector<std::size_t> degree(n, 1);
    for (const auto s : seq) ++degree[s];
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<bool> used(n, false);
    for (const auto s : seq) {
        for (std::size_t leaf = 0; leaf < n; ++leaf) {
            if (degree[leaf] == 1 && !used[leaf]) {
                edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
                used[leaf] = true;
                --degree[s];
                break;
            }
        }
    }
    std::size_t u = n, v = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!used[i] && degree[i] == 1) {
            if (u == n) {
                u = i;
            } else {
                v = i;
            }
        }
    }
    edges.emplace_back(u, v);
    return edges;
}

inline SpanningTreeOracle brute_force_mst(const std::vector<std::vector<double>>& dist) {
    const std::size_t n = dist.size();
    SpanningTreeOracle out;
    if (n < 2) return out;
    if (n == 2) {
        out.best_total = dist[0][1];
        out.best_edges = {{0, 1}};
        return out;
    }
    std::vector<std::size_t> seq(n - 2, 0);
    bool first = true;
    while (true) {
        const auto edges = tree_from_pruefer(seq, n);
        double total = 0.0;
        for (const auto& [a, b] : edges) total += dist[a][b];
        if (first || total < out.best_total) {
            out.best_total = total;
            out.best_edges = edges;
            first = false;
        }
        // next Pruefer sequence
        std::size_t pos = 0;
        while (pos < seq.size()) {
            if (++seq[pos] < n) break;
            seq[pos] = 0;
            ++pos;
        }
        if (pos == seq.size()) break;
    }
    std::sort(out.best_edges.begin(), out.best_edges.end());
    return out;
}

}  // namespace test_helpers
