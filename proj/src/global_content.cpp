#include "parley/global_content.hpp"

#include <cmath>
#include <regex>

#include <json.hpp>

namespace parley::global_content {

using corpus::AgendaGraph;
using corpus::Conversation;
using embedding::Vec;
using local_content::ContentThresholds;
using providers::ProviderBundle;
using nlohmann::json;

namespace {

constexpr double kEps = 1e-8;

std::vector<corpus::Turn> generated_turns(const Conversation& conv) {
    if (conv.history_length >= conv.turns.size()) return {};
    return {conv.turns.begin() + std::ptrdiff_t(conv.history_length), conv.turns.end()};
}

}  // namespace

ArtifactExtractor default_artifact_extractor() {
    return [](const Conversation& conv) -> std::optional<std::string> {
        // last complete fenced block anywhere in the conversation
        for (auto it = conv.turns.rbegin(); it != conv.turns.rend(); ++it) {
            const std::string& t = it->text;
            const std::size_t close = t.rfind("```");
            if (close == std::string::npos || close == 0) continue;
            const std::size_t open = t.rfind("```", close - 1);
            if (open == std::string::npos) continue;
            std::size_t body = open + 3;
            // drop an optional language tag line
            const std::size_t nl = t.find('\n', body);
            if (nl != std::string::npos && nl < close) {
                bool tag_only = true;
                for (std::size_t i = body; i < nl; ++i) {
                    if (std::isspace(static_cast<unsigned char>(t[i])) == 0 &&
                        std::isalnum(static_cast<unsigned char>(t[i])) == 0 && t[i] != '_' &&
                        t[i] != '-') {
                        tag_only = false;
                        break;
                    }
                }
                if (tag_only) body = nl + 1;
            }
            if (body >= close) return std::string();
            return t.substr(body, close - body);
        }
        return std::nullopt;
    };
}

namespace {

// pragmatic json_schema subset: type / required / properties, recursive
bool check_schema(const json& schema, const json& value) {
    if (schema.contains("type")) {
        const std::string ty = schema["type"].get<std::string>();
        if (ty == "object" && !value.is_object()) return false;
        if (ty == "array" && !value.is_array()) return false;
        if (ty == "string" && !value.is_string()) return false;
        if (ty == "number" && !value.is_number()) return false;
        if (ty == "integer" && !value.is_number_integer()) return false;
        if (ty == "boolean" && !value.is_boolean()) return false;
        if (ty == "null" && !value.is_null()) return false;
    }
    if (schema.contains("required")) {
        if (!value.is_object()) return false;
        for (const auto& k : schema["required"]) {
            if (!value.contains(k.get<std::string>())) return false;
        }
    }
    if (schema.contains("properties") && value.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (value.contains(key) && !check_schema(sub, value[key])) return false;
        }
    }
    if (schema.contains("items") && value.is_array()) {
        for (const auto& el : value) {
            if (!check_schema(schema["items"], el)) return false;
        }
    }
    return true;
}

}  // namespace

bool evaluate_predicate(const corpus::Predicate& pred, const std::string& artifact) {
    if (pred.kind == "contains") {
        return artifact.find(pred.arg) != std::string::npos;
    }
    if (pred.kind == "regex") {
        return std::regex_search(artifact, std::regex(pred.arg));
    }
    if (pred.kind == "json_schema") {
        json value = json::parse(artifact, nullptr, /*allow_exceptions=*/false);
        if (value.is_discarded()) return false;
        json schema = json::parse(pred.arg);
        return check_schema(schema, value);
    }
    throw std::invalid_argument("unknown predicate kind: " + pred.kind);
}

int sat(const corpus::AgendaItem& item, const Conversation& conv, const ContentThresholds& th,
        const ProviderBundle& bundle) {
    return local_content::info_cov(item, conv.turns, th, bundle) > th.tau_cov ? 1 : 0;
}

int task_success(const Conversation& conv, const corpus::ObjectiveSpec& objective,
                 const ContentThresholds& th, const ProviderBundle& bundle,
                 const ArtifactExtractor& extractor) {
    if (objective.mode == corpus::ObjectiveMode::artifact) {
        const auto artifact = extractor(conv);
        if (!artifact) {
            throw ArtifactExtractionError("no artifact could be extracted from conversation " +
                                          conv.id);
        }
        for (const auto& pred : objective.criteria) {
            if (!evaluate_predicate(pred, *artifact)) return 0;
        }
        return 1;
    }
    if (!conv.agenda) {
        throw std::invalid_argument("state objective requires an agenda");
    }
    const auto idx = conv.agenda->index_of(objective.terminal_item_id);
    return sat(conv.agenda->items[idx], conv, th, bundle);
}

double acr(const Conversation& conv, const AgendaGraph& agenda, const ContentThresholds& th,
           const ProviderBundle& bundle) {
    if (agenda.items.empty()) throw std::invalid_argument("acr over empty agenda");
    const auto cov = local_content::coverage_state(agenda, conv.turns, th, bundle);
    std::size_t saturated = 0;
    for (const bool s : cov.saturated) {
        if (s) ++saturated;
    }
    return double(saturated) / double(agenda.items.size());
}

std::optional<double> pe(const Conversation& conv, const AgendaGraph& agenda,
                         const ContentThresholds& th, const ProviderBundle& bundle) {
    const auto cov = local_content::coverage_state(agenda, conv.turns, th, bundle);
    std::size_t saturated = 0;
    double relevant = 0.0;
    for (std::size_t a = 0; a < agenda.items.size(); ++a) {
        if (cov.saturated[a]) {
            ++saturated;
            relevant += double(cov.relevant_turns[a].size());
        }
    }
    if (saturated == 0) return std::nullopt;
    return relevant / (double(saturated) + kEps);
}

LinearizedAgenda linearize(const AgendaGraph& agenda) {
    LinearizedAgenda lin;
    std::vector<bool> listed(agenda.items.size(), false);
    auto traverse = [&](auto&& self, std::size_t node) -> void {
        if (listed[node]) return;
        listed[node] = true;
        lin.order.push_back(node);
        for (const auto child : agenda.successors(node)) self(self, child);
    };
    traverse(traverse, agenda.index_of(agenda.start_item));
    for (std::size_t a = 0; a < agenda.items.size(); ++a) {
        if (!listed[a]) {
            listed[a] = true;
            lin.order.push_back(a);  // unreachable: appended in declaration order
        }
    }
    lin.position.resize(agenda.items.size());
    for (std::size_t r = 0; r < lin.order.size(); ++r) lin.position[lin.order[r]] = r;
    return lin;
}

Trajectory extract_trajectory(const Conversation& conv, const AgendaGraph& agenda,
                              std::size_t w, std::size_t delta, const ProviderBundle& bundle) {
    if (conv.turns.empty()) throw std::invalid_argument("trajectory over empty conversation");
    if (w == 0 || delta == 0) throw std::invalid_argument("trajectory needs w, delta >= 1");

    Trajectory traj;
    traj.window = w;
    traj.step = delta;

    const auto turn_vecs = bundle.embed_turns(conv.turns);
    std::vector<Vec> item_vecs;
    item_vecs.reserve(agenda.items.size());
    for (const auto& it : agenda.items) item_vecs.push_back(bundle.embed(it.text));

    const std::size_t n = conv.turns.size();
    std::size_t start = 0;
    while (true) {
        const std::size_t end = std::min(start + w, n);
        std::size_t best = 0;
        double best_sum = -1.0;
        for (std::size_t a = 0; a < item_vecs.size(); ++a) {
            double sum = 0.0;
            for (std::size_t t = start; t < end; ++t) {
                sum += bundle.sim(turn_vecs[t], item_vecs[a]);
            }
            if (sum > best_sum) {  // strict: declaration order wins ties
                best_sum = sum;
                best = a;
            }
        }
        traj.raw.push_back(best);
        if (start + w >= n) break;  // the block that reaches the end is last
        start += delta;
    }

    for (const auto z : traj.raw) {
        if (traj.deduped.empty() || traj.deduped.back() != z) traj.deduped.push_back(z);
    }
    return traj;
}

std::optional<double> cs_from_trajectory(const Trajectory& traj, const LinearizedAgenda& lin,
                                         std::size_t r) {
    const auto& z = traj.deduped;
    if (z.size() < 2) return std::nullopt;
    std::size_t regressions = 0;
    for (std::size_t j = 0; j + 1 < z.size(); ++j) {
        const auto a = double(lin.position[z[j]]);
        const auto b = double(lin.position[z[j + 1]]);
        if (std::abs(b - a) > double(r)) ++regressions;
    }
    return 1.0 - double(regressions) / double(z.size() - 1);
}

std::optional<double> cs(const Conversation& conv, const AgendaGraph& agenda, std::size_t w,
                         std::size_t delta, std::size_t r, const ProviderBundle& bundle) {
    const Trajectory traj = extract_trajectory(conv, agenda, w, delta, bundle);
    const LinearizedAgenda lin = linearize(agenda);
    return cs_from_trajectory(traj, lin, r);
}

double pd_from_embeddings(const std::vector<Vec>& generated) {
    if (generated.empty()) throw std::invalid_argument("pd needs at least one generated turn");
    const std::size_t t = generated.size();
    if (t == 1) return 0.0;
    return embedding::l2_distance(generated.back(), generated.front()) / double(t);
}

double pd(const Conversation& conv, const ProviderBundle& bundle) {
    const auto gen = generated_turns(conv);
    if (gen.empty()) throw std::invalid_argument("pd needs at least one generated turn");
    return pd_from_embeddings(bundle.embed_turns(gen));
}

std::optional<double> hmp_from_embeddings(const std::vector<Vec>& generated) {
    const std::size_t t = generated.size();
    if (t < 2) return std::nullopt;
    double inv_sum = 0.0;
    for (std::size_t i = 0; i + 1 < t; ++i) {
        inv_sum += 1.0 / (embedding::l2_distance(generated[i + 1], generated[i]) + kEps);
    }
    return double(t - 1) / inv_sum;
}

std::optional<double> hmp(const Conversation& conv, const ProviderBundle& bundle) {
    const auto gen = generated_turns(conv);
    if (gen.size() < 2) return std::nullopt;
    return hmp_from_embeddings(bundle.embed_turns(gen));
}

}  // namespace parley::global_content
