// RunConfig: canonical TOML-style serialization, subset parser, fingerprint.

#include <cmath>
#include <fstream>
#include <sstream>

#include "parley/errors.hpp"
#include "parley/report.hpp"
#include "parley/sha256.hpp"
#include "parley/text.hpp"

namespace parley::report {

namespace {

std::string fmt_double(double v) {
    // shortest representation that round-trips
    std::string s;
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << v;
        s = os.str();
        if (std::stod(s) == v) break;
    }
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out += "\"";
    return out;
}

struct TomlValue {
    enum class Type { string, number, boolean, array } type = Type::string;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<TomlValue> array;
};

// key -> value within "section.key" flat map
using TomlTable = std::map<std::string, TomlValue>;

TomlValue parse_value(std::string_view raw, std::size_t line_no);

TomlValue parse_array(std::string_view raw, std::size_t line_no) {
    TomlValue v;
    v.type = TomlValue::Type::array;
    std::string_view inner = raw.substr(1, raw.size() - 2);
    std::size_t depth = 0;
    bool in_str = false;
    std::string cur;
    auto flush = [&] {
        const auto t = text::trim(cur);
        if (!t.empty()) v.array.push_back(parse_value(t, line_no));
        cur.clear();
    };
    for (const char c : inner) {
        if (c == '"' ) in_str = !in_str;
        if (!in_str) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                flush();
                continue;
            }
        }
        cur.push_back(c);
    }
    flush();
    return v;
}

TomlValue parse_value(std::string_view raw, std::size_t line_no) {
    TomlValue v;
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        v.type = TomlValue::Type::string;
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                ++i;
            }
            out.push_back(raw[i]);
        }
        v.str = out;
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = TomlValue::Type::boolean;
        v.boolean = raw == "true";
        return v;
    }
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') throw ParseError("unterminated array", line_no);
        return parse_array(raw, line_no);
    }
    try {
        std::size_t used = 0;
        v.num = std::stod(std::string(raw), &used);
        if (used != raw.size()) throw std::invalid_argument("trailing");
        v.type = TomlValue::Type::number;
        return v;
    } catch (const std::exception&) {
        throw ParseError("cannot parse config value: " + std::string(raw), line_no);
    }
}

TomlTable parse_toml(const std::string& content, const std::string& origin) {
    TomlTable table;
    std::istringstream in(content);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments outside strings
        bool in_str = false;
        std::string stripped;
        for (const char c : line) {
            if (c == '"') in_str = !in_str;
            if (c == '#' && !in_str) break;
            stripped.push_back(c);
        }
        const auto t = text::trim(stripped);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("bad section header in " + origin, line_no);
            section = std::string(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key = value in " + origin, line_no);
        }
        const auto key = text::trim(t.substr(0, eq));
        const auto raw = text::trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key in " + origin, line_no);
        const std::string full =
            section.empty() ? std::string(key) : section + "." + std::string(key);
        table[full] = parse_value(raw, line_no);
    }
    return table;
}

double want_num(const TomlTable& t, const std::string& key, double fallback) {
    auto it = t.find(key);
    if (it == t.end()) return fallback;
    if (it->second.type != TomlValue::Type::number) {
        throw ParseError("config key " + key + " must be a number");
    }
    return it->second.num;
}

std::string want_str(const TomlTable& t, const std::string& key, const std::string& fallback) {
    auto it = t.find(key);
    if (it == t.end()) return fallback;
    if (it->second.type != TomlValue::Type::string) {
        throw ParseError("config key " + key + " must be a string");
    }
    return it->second.str;
}

bool want_bool(const TomlTable& t, const std::string& key, bool fallback) {
    auto it = t.find(key);
    if (it == t.end()) return fallback;
    if (it->second.type != TomlValue::Type::boolean) {
        throw ParseError("config key " + key + " must be a boolean");
    }
    return it->second.boolean;
}

std::vector<std::string> want_str_array(const TomlTable& t, const std::string& key,
                                        std::vector<std::string> fallback) {
    auto it = t.find(key);
    if (it == t.end()) return fallback;
    if (it->second.type != TomlValue::Type::array) {
        throw ParseError("config key " + key + " must be an array");
    }
    std::vector<std::string> out;
    for (const auto& v : it->second.array) {
        if (v.type != TomlValue::Type::string) {
            throw ParseError("config key " + key + " must hold strings");
        }
        out.push_back(v.str);
    }
    return out;
}

}  // namespace

RunConfig RunConfig::from_toml(const std::string& content, const std::string& origin) {
    const TomlTable t = parse_toml(content, origin);
    RunConfig cfg;

    cfg.dataset_paths = want_str_array(t, "dataset.paths", {});
    cfg.profiles_path = want_str(t, "dataset.profiles", "");
    cfg.label = want_str(t, "dataset.label", cfg.label);

    const std::string kind = want_str(t, "providers.kind", "baseline");
    if (kind == "baseline") {
        cfg.providers.kind = providers::ProviderConfig::Kind::baseline;
    } else if (kind == "remote") {
        cfg.providers.kind = providers::ProviderConfig::Kind::remote;
    } else {
        throw ParseError("providers.kind must be baseline or remote, got " + kind);
    }
    cfg.providers.endpoint = want_str(t, "providers.endpoint", "");
    cfg.providers.cache_path = want_str(t, "providers.cache", "");
    cfg.providers.seed = std::uint64_t(want_num(t, "providers.seed", 42));
    cfg.providers.embedding_dim =
        std::uint32_t(want_num(t, "providers.embedding_dim", 256));
    cfg.providers.topics = std::uint32_t(want_num(t, "providers.topics", 20));
    cfg.providers.lda_iterations =
        std::uint32_t(want_num(t, "providers.lda_iterations", 500));
    const std::string clamp = want_str(t, "providers.similarity_clamp", "zero");
    if (clamp == "zero") {
        cfg.providers.clamp = embedding::ClampMode::zero;
    } else if (clamp == "none") {
        cfg.providers.clamp = embedding::ClampMode::none;
    } else {
        throw ParseError("providers.similarity_clamp must be zero or none");
    }
    const double uv = want_num(t, "providers.uniform_lm_vocab", 0);
    if (uv > 0) cfg.providers.uniform_lm_vocab = std::size_t(uv);

    cfg.thresholds.tau_rel = want_num(t, "thresholds.tau_rel", cfg.thresholds.tau_rel);
    cfg.thresholds.tau_cov = want_num(t, "thresholds.tau_cov", cfg.thresholds.tau_cov);
    cfg.thresholds.tau_lnr = want_num(t, "thresholds.tau_lnr", cfg.thresholds.tau_lnr);
    cfg.thresholds.tau_topic = want_num(t, "thresholds.tau_topic", cfg.thresholds.tau_topic);
    cfg.thresholds.gamma = want_num(t, "thresholds.gamma", cfg.thresholds.gamma);
    cfg.thresholds.rho = want_num(t, "thresholds.rho", cfg.thresholds.rho);
    cfg.thresholds.delta = std::size_t(want_num(t, "thresholds.delta", double(cfg.thresholds.delta)));
    cfg.thresholds.ell = std::size_t(want_num(t, "thresholds.ell", double(cfg.thresholds.ell)));

    cfg.k = std::size_t(want_num(t, "local.k", double(cfg.k)));
    const std::string decay = want_str(t, "local.decay", "geometric");
    if (decay == "geometric") {
        cfg.decay.kind = local_speaker::DecaySpec::Kind::geometric;
    } else if (decay == "exponential") {
        cfg.decay.kind = local_speaker::DecaySpec::Kind::exponential;
    } else if (decay == "inverse") {
        cfg.decay.kind = local_speaker::DecaySpec::Kind::inverse;
    } else {
        throw ParseError("local.decay must be geometric, exponential, or inverse");
    }
    cfg.decay.parameter = want_num(t, "local.decay_param", cfg.decay.parameter);
    cfg.dnr_plain_name_match = want_bool(t, "local.name_match", cfg.dnr_plain_name_match);

    cfg.w = std::size_t(want_num(t, "global.w", double(cfg.w)));
    cfg.step = std::size_t(want_num(t, "global.step", double(cfg.step)));
    cfg.r = std::size_t(want_num(t, "global.r", double(cfg.r)));
    cfg.k_global = std::size_t(want_num(t, "global.k_global", double(cfg.k_global)));

    const auto suites = want_str_array(t, "run.suites", {});
    if (!suites.empty()) cfg.suites = std::set<std::string>(suites.begin(), suites.end());
    cfg.seed = std::uint64_t(want_num(t, "run.seed", 42));
    cfg.format = want_str(t, "run.format", cfg.format);
    cfg.jobs = int(want_num(t, "run.jobs", 0));

    if (cfg.k == 0) throw ParseError("local.k must be positive");
    if (cfg.w == 0 || cfg.step == 0) throw ParseError("global.w and global.step must be positive");
    if (cfg.format != "json" && cfg.format != "csv") {
        throw ParseError("run.format must be json or csv");
    }
    return cfg;
}

RunConfig RunConfig::from_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_toml(buf.str(), path);
}

std::string RunConfig::to_toml() const {
    std::ostringstream os;
    os << "[dataset]\n";
    os << "paths = [";
    for (std::size_t i = 0; i < dataset_paths.size(); ++i) {
        if (i) os << ", ";
        os << quote(dataset_paths[i]);
    }
    os << "]\n";
    os << "profiles = " << quote(profiles_path) << "\n";
    os << "label = " << quote(label) << "\n\n";

    os << "[providers]\n";
    os << "kind = "
       << quote(providers.kind == providers::ProviderConfig::Kind::baseline ? "baseline"
                                                                            : "remote")
       << "\n";
    os << "endpoint = " << quote(providers.endpoint) << "\n";
    os << "cache = " << quote(providers.cache_path) << "\n";
    os << "seed = " << providers.seed << "\n";
    os << "embedding_dim = " << providers.embedding_dim << "\n";
    os << "topics = " << providers.topics << "\n";
    os << "lda_iterations = " << providers.lda_iterations << "\n";
    os << "similarity_clamp = "
       << quote(providers.clamp == embedding::ClampMode::zero ? "zero" : "none") << "\n";
    os << "uniform_lm_vocab = "
       << (providers.uniform_lm_vocab ? *providers.uniform_lm_vocab : 0) << "\n\n";

    os << "[thresholds]\n";
    os << "tau_rel = " << fmt_double(thresholds.tau_rel) << "\n";
    os << "tau_cov = " << fmt_double(thresholds.tau_cov) << "\n";
    os << "tau_lnr = " << fmt_double(thresholds.tau_lnr) << "\n";
    os << "tau_topic = " << fmt_double(thresholds.tau_topic) << "\n";
    os << "gamma = " << fmt_double(thresholds.gamma) << "\n";
    os << "rho = " << fmt_double(thresholds.rho) << "\n";
    os << "delta = " << thresholds.delta << "\n";
    os << "ell = " << thresholds.ell << "\n\n";

    os << "[local]\n";
    os << "k = " << k << "\n";
    const char* decay_name = "geometric";
    if (decay.kind == local_speaker::DecaySpec::Kind::exponential) decay_name = "exponential";
    if (decay.kind == local_speaker::DecaySpec::Kind::inverse) decay_name = "inverse";
    os << "decay = " << quote(decay_name) << "\n";
    os << "decay_param = " << fmt_double(decay.parameter) << "\n";
    os << "name_match = " << (dnr_plain_name_match ? "true" : "false") << "\n\n";

    os << "[global]\n";
    os << "w = " << w << "\n";
    os << "step = " << step << "\n";
    os << "r = " << r << "\n";
    os << "k_global = " << k_global << "\n\n";

    os << "[run]\n";
    os << "suites = [";
    std::size_t i = 0;
    for (const auto& s : suites) {
        if (i++) os << ", ";
        os << quote(s);
    }
    os << "]\n";
    os << "seed = " << seed << "\n";
    os << "format = " << quote(format) << "\n";
    os << "jobs = " << jobs << "\n";
    return os.str();
}

std::string RunConfig::fingerprint() const {
    // jobs is an execution detail: thread count never changes any value,
    // so it stays out of the fingerprint
    RunConfig canon = *this;
    canon.jobs = 0;
    return sha256_hex(canon.to_toml());
}

}  // namespace parley::report
