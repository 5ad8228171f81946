// parley: batch evaluation of multi-party conversation generation.
//
// Subcommands:
//   eval            run a configured metric suite over a dataset
//   synth           generate a seeded synthetic dataset
//   inspect         print aggregate lines from a report
//   providers ping  check provider connectivity

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "parley/errors.hpp"
#include "parley/providers.hpp"
#include "parley/report.hpp"
#include "parley/synth.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;
constexpr int kProviderError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parley::ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw parley::ParseError("cannot write file: " + path);
    out << content;
}

struct EvalOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string suites;
    std::string providers_kind;
    std::string endpoint;
    std::int64_t seed = -1;
    int jobs = -1;
    bool print_defaults = false;
};

int run_eval(const EvalOptions& opt) {
    using parley::report::MetricReport;
    using parley::report::RunConfig;

    RunConfig cfg;
    if (opt.print_defaults) {
        std::cout << cfg.to_toml();
        return kOk;
    }
    if (!opt.config_path.empty()) cfg = RunConfig::from_toml_file(opt.config_path);

    if (!opt.format.empty()) cfg.format = opt.format;
    if (!opt.suites.empty()) {
        cfg.suites.clear();
        std::istringstream ss(opt.suites);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cfg.suites.insert(item);
        }
    }
    if (opt.seed >= 0) {
        cfg.seed = std::uint64_t(opt.seed);
        cfg.providers.seed = std::uint64_t(opt.seed);
    }
    if (opt.jobs >= 0) cfg.jobs = opt.jobs;
    if (!opt.providers_kind.empty()) {
        if (opt.providers_kind == "baseline") {
            cfg.providers.kind = parley::providers::ProviderConfig::Kind::baseline;
        } else {
            cfg.providers.kind = parley::providers::ProviderConfig::Kind::remote;
        }
    }
    if (!opt.endpoint.empty()) cfg.providers.endpoint = opt.endpoint;

    // resume guard: an existing report written under a different
    // configuration is never silently overwritten
    if (!opt.out_path.empty() && cfg.format == "json") {
        std::ifstream existing(opt.out_path);
        if (existing) {
            std::ostringstream buf;
            buf << existing.rdbuf();
            const MetricReport prev = MetricReport::from_json(buf.str());
            if (!prev.fingerprint.empty() && prev.fingerprint != cfg.fingerprint()) {
                std::cerr << "config hash mismatch on resume: existing report " << opt.out_path
                          << " has fingerprint " << prev.fingerprint
                          << ", current config is " << cfg.fingerprint() << "\n";
                return kDataError;
            }
        }
    }

    const MetricReport report = parley::report::run_evaluation(cfg);
    const std::string body =
        cfg.format == "csv" ? report.to_csv() : report.to_json(/*include_wall=*/true);
    if (opt.out_path.empty()) {
        std::cout << body;
    } else {
        write_file(opt.out_path, body);
        std::cerr << "wrote " << opt.out_path << " (" << report.per_conversation.size()
                  << " conversations, " << report.aggregates.size() << " metrics)\n";
    }
    return kOk;
}

int run_synth(const std::string& spec_path, const std::string& out_path, std::size_t count,
              const std::string& label) {
    parley::synth::SynthSpec spec;
    if (!spec_path.empty()) spec = parley::synth::SynthSpec::from_json_file(spec_path);
    const auto ds = parley::synth::gen_synthetic_dataset(spec, count, label);
    std::string body;
    for (const auto& conv : ds.conversations) {
        body += parley::corpus::serialize_conversation(conv);
        body += "\n";
    }
    if (out_path.empty()) {
        std::cout << body;
    } else {
        write_file(out_path, body);
        std::cerr << "wrote " << out_path << " (" << ds.conversations.size()
                  << " conversations)\n";
    }
    return kOk;
}

int run_inspect(const std::string& report_path, const std::string& metric) {
    const auto report = parley::report::MetricReport::from_json(read_file(report_path));
    bool any = false;
    for (const auto& [name, agg] : report.aggregates) {
        if (!metric.empty() && name != metric) continue;
        any = true;
        std::ostringstream line;
        line.precision(4);
        line << std::fixed;
        line << report.dataset_label << "  " << name << "  ";
        if (agg.n == 0) {
            line << "null (n=0)";
        } else {
            line << agg.mean << " ± " << agg.stddev << " (n=" << agg.n << ")";
        }
        std::cout << line.str() << "\n";
    }
    if (!metric.empty() && !any) {
        std::cerr << "metric not present in report: " << metric << "\n";
        return kDataError;
    }
    return kOk;
}

int run_ping(const std::string& kind, const std::string& endpoint) {
    if (kind == "baseline") {
        std::cout << "baseline providers: ok (in-process, deterministic)\n";
        return kOk;
    }
    std::string error;
    if (parley::providers::remote_reachable(endpoint, &error)) {
        std::cout << "remote providers at " << endpoint << ": ok\n";
        return kOk;
    }
    std::cerr << "remote providers at " << endpoint << ": unreachable (" << error << ")\n";
    return kProviderError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reference-free evaluation of multi-party conversation generation"};
    app.require_subcommand(1);

    EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "run the metric suite over a dataset");
    eval->add_option("--config", eval_opt.config_path, "TOML run configuration");
    eval->add_option("--out", eval_opt.out_path, "output report path (stdout if omitted)");
    eval->add_option("--format", eval_opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    eval->add_option("--suites", eval_opt.suites, "comma-separated suite list");
    eval->add_option("--seed", eval_opt.seed, "override run and provider seed");
    eval->add_option("--jobs", eval_opt.jobs, "worker threads (0 = runtime default)");
    eval->add_option("--providers", eval_opt.providers_kind, "baseline|remote")
        ->check(CLI::IsMember({"baseline", "remote"}));
    eval->add_option("--endpoint", eval_opt.endpoint, "remote provider endpoint");
    eval->add_flag("--print-defaults", eval_opt.print_defaults,
                   "dump the default configuration and exit");

    std::string synth_spec;
    std::string synth_out;
    std::size_t synth_count = 1;
    std::string synth_label = "synthetic";
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--spec", synth_spec, "synth spec JSON file");
    synth->add_option("--out", synth_out, "output JSONL path (stdout if omitted)");
    synth->add_option("--count", synth_count, "number of conversations");
    synth->add_option("--label", synth_label, "dataset label");

    std::string inspect_path;
    std::string inspect_metric;
    auto* inspect = app.add_subcommand("inspect", "print aggregates from a report");
    inspect->add_option("report", inspect_path, "report JSON path")->required();
    inspect->add_option("--metric", inspect_metric, "restrict to one metric");

    auto* providers_cmd = app.add_subcommand("providers", "provider utilities");
    providers_cmd->require_subcommand(1);
    std::string ping_kind = "baseline";
    std::string ping_endpoint;
    auto* ping = providers_cmd->add_subcommand("ping", "connectivity check");
    ping->add_option("--providers", ping_kind, "baseline|remote")
        ->check(CLI::IsMember({"baseline", "remote"}));
    ping->add_option("--endpoint", ping_endpoint, "remote endpoint");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (eval->parsed()) return run_eval(eval_opt);
        if (synth->parsed()) return run_synth(synth_spec, synth_out, synth_count, synth_label);
        if (inspect->parsed()) return run_inspect(inspect_path, inspect_metric);
        if (providers_cmd->parsed() && ping->parsed()) return run_ping(ping_kind, ping_endpoint);
    } catch (const parley::ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kProviderError;
    } catch (const parley::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsage;
}
