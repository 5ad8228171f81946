#include "parley/local_content.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parley/kernels.hpp"
#include "parley/text.hpp"

namespace parley::local_content {

using corpus::AgendaGraph;
using corpus::AgendaItem;
using corpus::ContextWindow;
using corpus::Turn;
using embedding::Vec;
using providers::ProviderBundle;

namespace {

std::vector<std::size_t> relevant_turn_indices(const Vec& item_vec, const std::vector<Vec>& turns,
                                               const ContentThresholds& th,
                                               const ProviderBundle& bundle) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (bundle.sim(item_vec, turns[i]) > th.tau_rel) out.push_back(i);
    }
    return out;
}

double info_cov_from(const std::vector<Vec>& relevant, const ContentThresholds& th,
                     const ProviderBundle& bundle) {
    const std::size_t n = relevant.size();
    if (n < 2) return 0.0;  // the pair average is undefined below two turns
    const double count_term = 1.0 - std::exp(-double(n) / th.gamma);
    const double diversity = kernels::mean_pairwise_dissimilarity(
        relevant, kernels::Exec::parallel, bundle.config().clamp);
    return count_term * diversity;
}

}  // namespace

double info_cov(const AgendaItem& item, const std::vector<Turn>& span,
                const ContentThresholds& th, const ProviderBundle& bundle) {
    const Vec item_vec = bundle.embed(item.text);
    const auto turn_vecs = bundle.embed_turns(span);
    const auto rel = relevant_turn_indices(item_vec, turn_vecs, th, bundle);
    std::vector<Vec> rel_vecs;
    rel_vecs.reserve(rel.size());
    for (const auto i : rel) rel_vecs.push_back(turn_vecs[i]);
    return info_cov_from(rel_vecs, th, bundle);
}

AgendaCoverageState coverage_state(const AgendaGraph& agenda, const std::vector<Turn>& span,
                                   const ContentThresholds& th, const ProviderBundle& bundle) {
    AgendaCoverageState st;
    const auto turn_vecs = bundle.embed_turns(span);
    st.relevant_turns.resize(agenda.items.size());
    st.info_cov.resize(agenda.items.size(), 0.0);
    st.saturated.resize(agenda.items.size(), false);
    for (std::size_t a = 0; a < agenda.items.size(); ++a) {
        const Vec item_vec = bundle.embed(agenda.items[a].text);
        st.relevant_turns[a] = relevant_turn_indices(item_vec, turn_vecs, th, bundle);
        std::vector<Vec> rel_vecs;
        rel_vecs.reserve(st.relevant_turns[a].size());
        for (const auto i : st.relevant_turns[a]) rel_vecs.push_back(turn_vecs[i]);
        st.info_cov[a] = info_cov_from(rel_vecs, th, bundle);
        st.saturated[a] = st.info_cov[a] > th.tau_cov;
    }
    st.current_item = current_item(st);
    return st;
}

std::size_t current_item(const AgendaCoverageState& cov) {
    std::size_t best = 0;
    std::size_t best_count = 0;
    for (std::size_t a = 0; a < cov.relevant_turns.size(); ++a) {
        if (cov.relevant_turns[a].size() > best_count) {  // strict: first declared wins ties
            best = a;
            best_count = cov.relevant_turns[a].size();
        }
    }
    return best;
}

namespace {

std::optional<std::size_t> dfs_next(const AgendaGraph& agenda, std::size_t node,
                                    const AgendaCoverageState& cov, const ContentThresholds& th,
                                    std::vector<bool>& discovered) {
    if (discovered[node]) return std::nullopt;
    discovered[node] = true;
    if (cov.info_cov[node] <= th.tau_cov) return node;
    for (const auto succ : agenda.successors(node)) {
        if (auto r = dfs_next(agenda, succ, cov, th, discovered)) return r;
    }
    for (const auto pred : agenda.predecessors(node)) {
        if (auto r = dfs_next(agenda, pred, cov, th, discovered)) return r;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::size_t> next_unsaturated(const AgendaGraph& agenda, std::size_t from,
                                            const AgendaCoverageState& cov,
                                            const ContentThresholds& th) {
    std::vector<bool> discovered(agenda.items.size(), false);
    return dfs_next(agenda, from, cov, th, discovered);
}

ApResult ap(const std::string& candidate_text, const ContextWindow& window,
            const AgendaGraph& agenda, const ContentThresholds& th,
            const ProviderBundle& bundle) {
    ApResult res;
    const AgendaCoverageState cov = coverage_state(agenda, window.turns, th, bundle);

    std::size_t target = cov.current_item;
    if (cov.saturated[target]) {
        const auto next = next_unsaturated(agenda, target, cov, th);
        if (!next) {
            res.agenda_exhausted = true;
            res.value = 0.0;
            res.target_item = target;
            return res;
        }
        target = *next;
    }
    res.target_item = target;

    const Vec cand = bundle.embed(candidate_text);
    const Vec item_vec = bundle.embed(agenda.items[target].text);
    const auto turn_vecs = bundle.embed_turns(window.turns);

    double info_gain = 1.0;  // empty relevant set: first on-topic message gets full credit
    const auto& rel = cov.relevant_turns[target];
    if (!rel.empty()) {
        double sum = 0.0;
        for (const auto i : rel) sum += 1.0 - bundle.sim(cand, turn_vecs[i]);
        info_gain = sum / double(rel.size());
    }
    res.value = bundle.sim(cand, item_vec) * info_gain;
    return res;
}

LexicalUnitSet lexical_units(const std::string& text_in) {
    return LexicalUnitSet{text::lexical_units(text_in)};
}

namespace {

std::set<std::string> window_units(const ContextWindow& window) {
    std::set<std::string> out;
    for (const auto& t : window.turns) {
        auto u = text::lexical_units(t.text);
        out.insert(u.begin(), u.end());
    }
    return out;
}

// units of the candidate that are semantically far from every window unit
std::set<std::string> truly_novel_units(const std::set<std::string>& cand,
                                        const std::set<std::string>& ctx,
                                        const ContentThresholds& th,
                                        const ProviderBundle& bundle) {
    if (ctx.empty()) return cand;
    std::vector<std::string> cand_v(cand.begin(), cand.end());
    std::vector<std::string> ctx_v(ctx.begin(), ctx.end());
    const auto cand_vecs = bundle.embedder().embed(cand_v);
    const auto ctx_vecs = bundle.embedder().embed(ctx_v);
    const auto best = kernels::max_similarity_per_query(cand_vecs, ctx_vecs,
                                                        kernels::Exec::parallel,
                                                        bundle.config().clamp);
    std::set<std::string> out;
    for (std::size_t i = 0; i < cand_v.size(); ++i) {
        if (best[i] < th.tau_lnr) out.insert(cand_v[i]);
    }
    return out;
}

}  // namespace

std::optional<double> lnr(const std::string& candidate_text, const ContextWindow& window) {
    const auto cand = text::lexical_units(candidate_text);
    if (cand.empty()) return std::nullopt;
    const auto ctx = window_units(window);
    std::size_t novel = 0;
    for (const auto& u : cand) {
        if (!ctx.count(u)) ++novel;
    }
    return double(novel) / double(cand.size());
}

std::optional<double> lnr_e(const std::string& candidate_text, const ContextWindow& window,
                            const ContentThresholds& th, const ProviderBundle& bundle) {
    const auto cand = text::lexical_units(candidate_text);
    if (cand.empty()) return std::nullopt;
    const auto tn = truly_novel_units(cand, window_units(window), th, bundle);
    return double(tn.size()) / double(cand.size());
}

std::optional<double> lnr_e_w(const std::string& candidate_text, const ContextWindow& window,
                              const ContentThresholds& th, const ProviderBundle& bundle) {
    const auto cand = text::lexical_units(candidate_text);
    if (cand.empty()) return std::nullopt;
    const auto tn = truly_novel_units(cand, window_units(window), th, bundle);
    const auto& idf = bundle.idf();
    double num = 0.0;
    double den = 0.0;
    for (const auto& u : cand) {
        const double w = idf.weight(u);
        den += w;
        if (tn.count(u)) num += w;
    }
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

double m_sns(const std::string& candidate_text, const ContextWindow& window, SnsMode mode,
             const ProviderBundle& bundle) {
    if (window.turns.empty()) throw std::invalid_argument("m_sns over empty window");
    const Vec cand = bundle.embed(candidate_text);
    const auto turn_vecs = bundle.embed_turns(window.turns);
    double sum = 0.0;
    double best = 2.0;
    for (const auto& v : turn_vecs) {
        const double d = 1.0 - bundle.sim(cand, v);
        sum += d;
        best = std::min(best, d);
    }
    return mode == SnsMode::min ? best : sum / double(turn_vecs.size());
}

double daf(const std::string& candidate_text, const ContextWindow& window,
           const ProviderBundle& bundle) {
    const auto history = bundle.tag_sequence(window.turns);
    const auto cand_act =
        bundle.acts().tag(candidate_text,
                          history.empty() ? std::nullopt : std::optional(history.back()));
    return bundle.transitions().transition_prob(history, cand_act);
}

double ll(const std::string& candidate_text, const ContextWindow& window,
          const ProviderBundle& bundle) {
    std::vector<std::string> context;
    context.reserve(window.turns.size());
    for (const auto& t : window.turns) context.push_back(t.text);
    const lm::TokenLogProbs lp = bundle.language_model().score(context, candidate_text);
    const double mean = std::accumulate(lp.logprobs.begin(), lp.logprobs.end(), 0.0) /
                        double(lp.logprobs.size());
    return std::exp(mean);
}

std::vector<std::size_t> dominant_topics(const std::vector<double>& dist, double rho) {
    std::vector<std::size_t> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dist[a] > dist[b];  // stable keeps index order on ties
    });
    std::vector<std::size_t> dom;
    double mass = 0.0;
    for (const auto t : order) {
        if (mass >= rho) break;
        if (dist[t] <= 0.0) break;  // zero-mass topics can never help reach rho
        dom.push_back(t);
        mass += dist[t];
    }
    return dom;
}

std::optional<double> tes(const std::string& candidate_text, const corpus::Conversation& conv,
                          std::size_t end_index, const ContentThresholds& th,
                          const ProviderBundle& bundle) {
    if (end_index == 0 || end_index > conv.turns.size()) {
        throw std::out_of_range("tes end_index out of range");
    }

    auto recent = [&](std::size_t h) {
        const std::size_t take = std::min(h, end_index);
        return std::vector<corpus::Turn>(conv.turns.begin() + std::ptrdiff_t(end_index - take),
                                         conv.turns.begin() + std::ptrdiff_t(end_index));
    };

    // Step 1: expand the context until the topic mixture stabilizes; if the
    // condition never triggers, use the full history.
    std::size_t h_star = end_index;
    for (std::size_t h = th.delta; h + th.delta <= end_index; h += th.delta) {
        const auto ph = bundle.turns_topics(recent(h));
        const auto ph_next = bundle.turns_topics(recent(h + th.delta));
        if (!ph || !ph_next) continue;
        if (topics::jsd(*ph, *ph_next) > th.tau_topic) {
            h_star = h;
            break;
        }
    }
    const auto established = bundle.turns_topics(recent(h_star));
    if (!established) return std::nullopt;

    // Step 2: candidate mixture over a short support window
    std::vector<std::string> tokens;
    for (const auto& t : recent(th.ell)) {
        for (auto& tok : text::content_tokens(t.text)) tokens.push_back(std::move(tok));
    }
    for (auto& tok : text::content_tokens(candidate_text)) tokens.push_back(std::move(tok));
    if (tokens.empty()) return std::nullopt;
    const auto q = bundle.topics().distribution(tokens);

    const auto dom = dominant_topics(*established, th.rho);
    std::vector<bool> is_dom(q.size(), false);
    for (const auto t : dom) is_dom[t] = true;
    double out = 0.0;
    for (std::size_t t = 0; t < q.size(); ++t) {
        if (!is_dom[t]) out += q[t];
    }
    return out;
}

}  // namespace parley::local_content
