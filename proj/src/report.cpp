#include "parley/report.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "parley/errors.hpp"
#include "parley/global_consistency.hpp"
#include "parley/global_content.hpp"
#include "parley/global_speaker.hpp"
#include "parley/kernels.hpp"
#include "parley/local_consistency.hpp"

namespace parley::report {

using nlohmann::json;

const std::vector<std::pair<std::string, std::string>>& metric_suite_table() {
    static const std::vector<std::pair<std::string, std::string>> kTable = {
        {"DNR", "local_speaker"},
        {"IR", "local_speaker"},
        {"PF", "local_speaker"},
        {"LS-ES-avg", "local_speaker"},
        {"LS-ES-max", "local_speaker"},
        {"LS-TA", "local_speaker"},
        {"AP", "local_content"},
        {"LNR", "local_content"},
        {"LNR-E", "local_content"},
        {"LNR-E-w", "local_content"},
        {"M-SNS-avg", "local_content"},
        {"M-SNS-min", "local_content"},
        {"DAF", "local_content"},
        {"LL", "local_content"},
        {"TES", "local_content"},
        {"LSCC-ES-avg", "local_consistency"},
        {"LSCC-ES-max", "local_consistency"},
        {"LSCC-ES-min", "local_consistency"},
        {"LSCC-ES-aug", "local_consistency"},
        {"NSE", "global_speaker"},
        {"SC-Gini", "global_speaker"},
        {"Phi", "global_content"},
        {"ACR", "global_content"},
        {"PE", "global_content"},
        {"CS", "global_content"},
        {"PD", "global_content"},
        {"HMP", "global_content"},
        {"GSCC-DC-avg", "global_consistency"},
        {"GSCC-DC-max", "global_consistency"},
        {"GSCC-DC-avg-multi", "global_consistency"},
        {"GSCC-DC-max-multi", "global_consistency"},
    };
    return kTable;
}

Aggregate aggregate_values(const std::vector<double>& defined) {
    Aggregate a;
    a.n = defined.size();
    if (a.n == 0) return a;
    double sum = 0.0;
    for (const double v : defined) sum += v;
    a.mean = sum / double(a.n);
    double var = 0.0;
    for (const double v : defined) var += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(var / double(a.n));
    return a;
}

namespace {

// mean over defined per-point values; remembers why nothing was defined
struct PointAccumulator {
    double sum = 0.0;
    std::size_t n = 0;
    std::string reason = "no_eval_points";

    void add(std::optional<double> v, const char* undefined_reason) {
        if (v) {
            sum += *v;
            ++n;
        } else if (n == 0) {
            reason = undefined_reason;
        }
    }
    std::optional<double> value() const {
        if (n == 0) return std::nullopt;
        return sum / double(n);
    }
};

void put(std::map<std::string, std::optional<double>>& out,
         std::map<std::string, std::string>* reasons, const std::string& metric,
         std::optional<double> v, const std::string& reason) {
    out[metric] = v;
    if (!v && reasons) (*reasons)[metric] = reason;
}

}  // namespace

std::map<std::string, std::optional<double>> evaluate_conversation(
    const corpus::Conversation& conv, const corpus::Dataset& ds,
    const providers::ProviderBundle& bundle, const RunConfig& cfg,
    std::map<std::string, std::string>* reasons) {
    std::map<std::string, std::optional<double>> out;
    const auto want = [&](const char* suite) { return cfg.suites.count(suite) > 0; };

    // ---- local metrics: one evaluation point per generated turn with a
    // non-empty context window
    const bool any_local = want("local_speaker") || want("local_content") ||
                           want("local_consistency");
    if (any_local) {
        std::map<std::string, PointAccumulator> acc;
        const std::size_t start = std::max<std::size_t>(1, conv.history_length);
        for (std::size_t t = start; t < conv.turns.size(); ++t) {
            const auto window = corpus::context_window(conv, t, cfg.k);
            const std::string& predicted = conv.turns[t].speaker_id;
            const std::string& candidate = conv.turns[t].text;
            const corpus::SpeakerProfile* profile = ds.profile_for(predicted);

            if (want("local_speaker")) {
                acc["DNR"].add(double(local_speaker::dnr(predicted, window,
                                                         cfg.dnr_plain_name_match)),
                               "");
                acc["IR"].add(local_speaker::ir(predicted, window, cfg.decay), "");
                acc["PF"].add(local_speaker::pf(predicted, window), "");
                acc["LS-ES-avg"].add(
                    local_speaker::ls_es(predicted, window, local_speaker::EsMode::avg, bundle,
                                         profile),
                    "speaker_history_empty");
                acc["LS-ES-max"].add(
                    local_speaker::ls_es(predicted, window, local_speaker::EsMode::max, bundle,
                                         profile),
                    "speaker_history_empty");
                acc["LS-TA"].add(local_speaker::ls_ta(predicted, window, bundle),
                                 "speaker_history_empty");
            }
            if (want("local_content")) {
                if (conv.agenda) {
                    const auto ap = local_content::ap(candidate, window, *conv.agenda,
                                                      cfg.thresholds, bundle);
                    acc["AP"].add(ap.value, "");
                } else {
                    acc["AP"].add(std::nullopt, "no_agenda");
                }
                acc["LNR"].add(local_content::lnr(candidate, window), "no_lexical_units");
                acc["LNR-E"].add(local_content::lnr_e(candidate, window, cfg.thresholds, bundle),
                                 "no_lexical_units");
                acc["LNR-E-w"].add(
                    local_content::lnr_e_w(candidate, window, cfg.thresholds, bundle),
                    "no_lexical_units");
                acc["M-SNS-avg"].add(
                    local_content::m_sns(candidate, window, local_content::SnsMode::avg, bundle),
                    "");
                acc["M-SNS-min"].add(
                    local_content::m_sns(candidate, window, local_content::SnsMode::min, bundle),
                    "");
                acc["DAF"].add(local_content::daf(candidate, window, bundle), "");
                acc["LL"].add(local_content::ll(candidate, window, bundle), "");
                acc["TES"].add(local_content::tes(candidate, conv, t, cfg.thresholds, bundle),
                               "no_content_tokens");
            }
            if (want("local_consistency")) {
                acc["LSCC-ES-avg"].add(
                    local_consistency::lscc_es(candidate, predicted, window,
                                               local_consistency::Mode::avg, bundle),
                    "speaker_history_empty");
                acc["LSCC-ES-max"].add(
                    local_consistency::lscc_es(candidate, predicted, window,
                                               local_consistency::Mode::max, bundle),
                    "speaker_history_empty");
                acc["LSCC-ES-min"].add(
                    local_consistency::lscc_es(candidate, predicted, window,
                                               local_consistency::Mode::min, bundle),
                    "speaker_history_empty");
                const bool has_bg = profile && profile->background_text;
                const bool has_turns =
                    !corpus::turns_by_speaker(window.turns, predicted).empty();
                if (has_bg || has_turns) {
                    acc["LSCC-ES-aug"].add(
                        local_consistency::lscc_es_aug(candidate, predicted, window, bundle,
                                                       profile),
                        "");
                } else {
                    acc["LSCC-ES-aug"].add(std::nullopt, "no_history_or_background");
                }
            }
        }
        for (auto& [metric, a] : acc) put(out, reasons, metric, a.value(), a.reason);
        // conversations without evaluation points still report their local
        // metrics, as nulls
        for (const auto& [metric, suite] : metric_suite_table()) {
            if (suite.rfind("local_", 0) == 0 && cfg.suites.count(suite) && !out.count(metric)) {
                put(out, reasons, metric, std::nullopt, "no_eval_points");
            }
        }
    }

    // ---- global metrics
    if (want("global_speaker")) {
        put(out, reasons, "NSE", global_speaker::nse(conv), "");
        const auto speakers = global_speaker::participation(conv).speakers;
        if (speakers.size() < 2) {
            put(out, reasons, "SC-Gini", std::nullopt, "single_speaker");
        } else {
            put(out, reasons, "SC-Gini", global_speaker::sc_gini(conv, bundle),
                "zero_total_contribution");
        }
    }
    if (want("global_content")) {
        if (conv.objective) {
            try {
                put(out, reasons, "Phi",
                    double(global_content::task_success(conv, *conv.objective, cfg.thresholds,
                                                        bundle)),
                    "");
            } catch (const global_content::ArtifactExtractionError&) {
                put(out, reasons, "Phi", std::nullopt, "artifact_extraction_failed");
            }
        } else {
            put(out, reasons, "Phi", std::nullopt, "no_objective");
        }
        if (conv.agenda && !conv.agenda->items.empty()) {
            put(out, reasons, "ACR",
                global_content::acr(conv, *conv.agenda, cfg.thresholds, bundle), "");
            put(out, reasons, "PE", global_content::pe(conv, *conv.agenda, cfg.thresholds, bundle),
                "no_saturated_items");
            put(out, reasons, "CS",
                global_content::cs(conv, *conv.agenda, cfg.w, cfg.step, cfg.r, bundle),
                "single_trajectory_block");
        } else {
            put(out, reasons, "ACR", std::nullopt, "no_agenda");
            put(out, reasons, "PE", std::nullopt, "no_agenda");
            put(out, reasons, "CS", std::nullopt, "no_agenda");
        }
        if (conv.generated_count() >= 1) {
            put(out, reasons, "PD", global_content::pd(conv, bundle), "");
        } else {
            put(out, reasons, "PD", std::nullopt, "no_generated_turns");
        }
        if (conv.generated_count() >= 2) {
            put(out, reasons, "HMP", global_content::hmp(conv, bundle), "");
        } else {
            put(out, reasons, "HMP", std::nullopt, "too_few_generated_turns");
        }
    }
    if (want("global_consistency")) {
        const auto speakers = global_speaker::participation(conv).speakers;
        struct Acc {
            double sum = 0.0;
            std::size_t n = 0;
        };
        std::map<std::string, Acc> g;
        for (const auto& s : speakers) {
            try {
                const auto single = global_consistency::single_centroid(conv, s, bundle);
                g["GSCC-DC-avg"].sum += global_consistency::gscc_dc(
                    conv, s, single, global_consistency::Mode::avg, bundle);
                ++g["GSCC-DC-avg"].n;
                g["GSCC-DC-max"].sum += global_consistency::gscc_dc(
                    conv, s, single, global_consistency::Mode::max, bundle);
                ++g["GSCC-DC-max"].n;
                const auto multi = global_consistency::multi_centroids(conv, s, bundle, cfg.seed);
                g["GSCC-DC-avg-multi"].sum += global_consistency::gscc_dc(
                    conv, s, multi, global_consistency::Mode::avg, bundle);
                ++g["GSCC-DC-avg-multi"].n;
                g["GSCC-DC-max-multi"].sum += global_consistency::gscc_dc(
                    conv, s, multi, global_consistency::Mode::max, bundle);
                ++g["GSCC-DC-max-multi"].n;
            } catch (const std::exception&) {
                // unstable centroid for this speaker; the speaker is skipped
            }
        }
        for (const char* m :
             {"GSCC-DC-avg", "GSCC-DC-max", "GSCC-DC-avg-multi", "GSCC-DC-max-multi"}) {
            const auto it = g.find(m);
            if (it == g.end() || it->second.n == 0) {
                put(out, reasons, m, std::nullopt, "no_stable_centroids");
            } else {
                put(out, reasons, m, it->second.sum / double(it->second.n), "");
            }
        }
    }
    return out;
}

MetricReport evaluate_dataset(const corpus::Dataset& ds, const RunConfig& cfg) {
    if (ds.conversations.empty()) throw ParseError("empty dataset: nothing to evaluate");
    const auto t0 = std::chrono::steady_clock::now();

    kernels::set_threads(cfg.jobs);
    const providers::ProviderBundle bundle = providers::ProviderBundle::build(ds, cfg.providers);

    MetricReport report;
    report.fingerprint = cfg.fingerprint();
    report.dataset_label = ds.source_label.empty() ? cfg.label : ds.source_label;
    report.provider_models = bundle.model_identifiers();

    const std::size_t n = ds.conversations.size();
    std::vector<std::map<std::string, std::optional<double>>> values(n);
    std::vector<std::map<std::string, std::string>> reasons(n);
    std::vector<std::string> errors(n);

    // per-conversation evaluation is independent; results merge by id below
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
        const auto idx = std::size_t(i);
        try {
            values[idx] = evaluate_conversation(ds.conversations[idx], ds, bundle, cfg,
                                                &reasons[idx]);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    }

    std::map<std::string, std::vector<double>> defined;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& id = ds.conversations[i].id;
        if (!errors[i].empty()) {
            report.null_reasons[id]["__error__"] = errors[i];
            continue;
        }
        report.per_conversation[id] = values[i];
        if (!reasons[i].empty()) report.null_reasons[id] = reasons[i];
        for (const auto& [metric, v] : values[i]) {
            if (v) defined[metric].push_back(*v);
        }
    }
    for (const auto& [metric, vals] : defined) {
        report.aggregates[metric] = aggregate_values(vals);
    }
    // metrics that were always null still appear with n = 0
    for (const auto& [metric, suite] : metric_suite_table()) {
        if (!cfg.suites.count(suite)) continue;
        if (!report.aggregates.count(metric)) report.aggregates[metric] = Aggregate{};
    }

    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

MetricReport run_evaluation(const RunConfig& cfg) {
    if (cfg.dataset_paths.empty()) throw ParseError("no dataset paths configured");
    corpus::Dataset merged;
    merged.source_label = cfg.label;
    std::set<std::string> ids;
    for (const auto& path : cfg.dataset_paths) {
        corpus::Dataset part = corpus::parse_dataset(path);
        for (auto& conv : part.conversations) {
            if (!ids.insert(conv.id).second) {
                throw ParseError("duplicate conversation id across datasets: " + conv.id);
            }
            merged.conversations.push_back(std::move(conv));
        }
    }
    if (!cfg.profiles_path.empty()) corpus::parse_profiles(cfg.profiles_path, merged);
    return evaluate_dataset(merged, cfg);
}

std::string MetricReport::to_json(bool include_wall) const {
    json j;
    j["fingerprint"] = fingerprint;
    j["dataset_label"] = dataset_label;
    json prov;
    for (const auto& [k, v] : provider_models) prov[k] = v;
    j["providers"] = std::move(prov);

    json per;
    for (const auto& [id, metrics] : per_conversation) {
        json one;
        for (const auto& [metric, value] : metrics) {
            if (value) {
                one[metric] = *value;
            } else {
                one[metric] = nullptr;
            }
        }
        per[id] = std::move(one);
    }
    j["per_conversation"] = std::move(per);

    json agg;
    for (const auto& [metric, a] : aggregates) {
        agg[metric] = {{"mean", a.mean}, {"std", a.stddev}, {"n", a.n}};
    }
    j["aggregates"] = std::move(agg);

    if (!null_reasons.empty()) {
        json nr;
        for (const auto& [id, metrics] : null_reasons) {
            json one;
            for (const auto& [metric, reason] : metrics) one[metric] = reason;
            nr[id] = std::move(one);
        }
        j["null_reasons"] = std::move(nr);
    }
    if (include_wall) j["wall_ms"] = wall_ms;
    return j.dump(2) + "\n";
}

std::string MetricReport::to_csv() const {
    std::string out = "metric,mean,std,n\n";
    for (const auto& [metric, a] : aggregates) {
        json row = json::array({a.mean, a.stddev});
        out += metric + "," + row[0].dump() + "," + row[1].dump() + "," + std::to_string(a.n) +
               "\n";
    }
    return out;
}

MetricReport MetricReport::from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what());
    }
    MetricReport r;
    r.fingerprint = j.value("fingerprint", "");
    r.dataset_label = j.value("dataset_label", "");
    if (j.contains("providers")) {
        for (const auto& [k, v] : j["providers"].items()) {
            r.provider_models.emplace_back(k, v.get<std::string>());
        }
    }
    if (j.contains("per_conversation")) {
        for (const auto& [id, metrics] : j["per_conversation"].items()) {
            for (const auto& [metric, v] : metrics.items()) {
                r.per_conversation[id][metric] =
                    v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
            }
        }
    }
    if (j.contains("aggregates")) {
        for (const auto& [metric, a] : j["aggregates"].items()) {
            r.aggregates[metric] = Aggregate{a.at("mean").get<double>(),
                                             a.at("std").get<double>(),
                                             a.at("n").get<std::size_t>()};
        }
    }
    if (j.contains("wall_ms")) r.wall_ms = j["wall_ms"].get<double>();
    return r;
}

}  // namespace parley::report
