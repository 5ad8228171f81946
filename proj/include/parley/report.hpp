#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parley/corpus.hpp"
#include "parley/local_content.hpp"
#include "parley/local_speaker.hpp"
#include "parley/providers.hpp"

namespace parley::report {

// Every tunable of a run. The canonical TOML dump doubles as the
// fingerprint input, so every default is visible and versioned.
struct RunConfig {
    std::vector<std::string> dataset_paths;
    std::string profiles_path;
    std::string label = "dataset";

    providers::ProviderConfig providers;
    local_content::ContentThresholds thresholds;

    std::size_t k = 10;  // local context window
    local_speaker::DecaySpec decay;
    bool dnr_plain_name_match = true;

    std::size_t w = 5;      // trajectory block size
    std::size_t step = 2;   // trajectory step (delta)
    std::size_t r = 1;      // non-regression reach
    std::size_t k_global = 10;

    std::set<std::string> suites = {"local_speaker",  "local_content",
                                    "local_consistency", "global_speaker",
                                    "global_content", "global_consistency"};
    std::uint64_t seed = 42;
    std::string format = "json";  // json | csv
    int jobs = 0;

    static RunConfig from_toml(const std::string& content, const std::string& origin);
    static RunConfig from_toml_file(const std::string& path);

    std::string to_toml() const;      // canonical serialization
    std::string fingerprint() const;  // sha256 of the canonical serialization
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // population formula over defined values
    std::size_t n = 0;
};

struct MetricReport {
    std::string fingerprint;
    std::string dataset_label;
    std::vector<std::pair<std::string, std::string>> provider_models;
    // conversation id -> metric -> value (nullopt = undefined)
    std::map<std::string, std::map<std::string, std::optional<double>>> per_conversation;
    // conversation id -> metric -> reason for null
    std::map<std::string, std::map<std::string, std::string>> null_reasons;
    std::map<std::string, Aggregate> aggregates;
    double wall_ms = 0.0;

    // Deterministic body; wall clock appears only when include_wall is set.
    std::string to_json(bool include_wall = true) const;
    std::string to_csv() const;  // aggregates table

    static MetricReport from_json(const std::string& content);
};

// All metric names, in report order, with their suite.
const std::vector<std::pair<std::string, std::string>>& metric_suite_table();

Aggregate aggregate_values(const std::vector<double>& defined);

// Per-conversation metric computation; exposed for tests.
std::map<std::string, std::optional<double>> evaluate_conversation(
    const corpus::Conversation& conv, const corpus::Dataset& ds,
    const providers::ProviderBundle& bundle, const RunConfig& cfg,
    std::map<std::string, std::string>* reasons = nullptr);

MetricReport evaluate_dataset(const corpus::Dataset& ds, const RunConfig& cfg);

// Loads datasets from cfg.dataset_paths (merging, duplicate ids rejected),
// builds baseline or remote providers, and evaluates.
MetricReport run_evaluation(const RunConfig& cfg);

}  // namespace parley::report
