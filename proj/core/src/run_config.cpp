#include "synthbench/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "synthbench/error.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& content) {
    KeyValueFile kv;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = strip(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + " is not 'key = value': " + line);
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key on config line " + std::to_string(lineno));
        if (!kv.values_.emplace(key, value).second) {
            throw ConfigError("duplicate config key '" + key + "'");
        }
    }
    return kv;
}

std::string KeyValueFile::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string KeyValueFile::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
}

std::uint64_t KeyValueFile::get_uint(const std::string& key, std::uint64_t fallback) const {
    const std::int64_t v = get_int(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw ConfigError("config key '" + key + "' must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: " + it->second);
}

std::vector<std::string> KeyValueFile::get_list(const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream in(get(key, ""));
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

void KeyValueFile::reject_unknown_keys(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : values_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

MapSpec parse_map_spec(const std::string& spec) {
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("map spec must be 'source:target:path', got '" + spec + "'");
    }
    MapSpec out{parse_code_system(spec.substr(0, c1)), parse_code_system(spec.substr(c1 + 1, c2 - c1 - 1)),
                spec.substr(c2 + 1)};
    if (out.path.empty()) throw ConfigError("map spec has empty path: '" + spec + "'");
    return out;
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "seed", "workers", "out_dir", "report_format",
    "real.matrix", "real.events", "real.system", "real.patient_col", "real.code_col", "real.system_col",
    "real.time_col", "real.maps", "real.truncate_parents", "real.min_patients", "real.fixed_vocab",
    "real.demographics", "real.cohort_filter",
    "syn.matrix", "syn.method", "syn.m",
    "metrics.fidelity", "metrics.utility", "metrics.privacy",
    "fidelity.folds",
    "utility.outcome", "utility.sweep", "utility.stratified_split", "utility.analytical",
    "privacy.hist_bins", "privacy.n_balanced", "privacy.n_imbalanced", "privacy.imbalanced_rule",
    "scale.m_grid", "scale.n_grid", "scale.replicates",
};

}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    return from_key_values(KeyValueFile::parse_file(path));
}

RunConfig RunConfig::from_key_values(const KeyValueFile& kv) {
    kv.reject_unknown_keys(kKnownKeys);
    RunConfig cfg;
    cfg.seed = kv.get_uint("seed", 0);
    cfg.workers = static_cast<unsigned>(kv.get_uint("workers", 0));
    cfg.out_dir = kv.get("out_dir", "out");
    cfg.report_format = kv.get("report_format", "json");
    if (cfg.report_format != "json" && cfg.report_format != "csv" && cfg.report_format != "both") {
        throw ConfigError("report_format must be json, csv, or both");
    }

    cfg.real.matrix = kv.get("real.matrix", "");
    cfg.real.events = kv.get("real.events", "");
    if (cfg.real.matrix.empty() && cfg.real.events.empty()) {
        throw ConfigError("config needs real.matrix or real.events");
    }
    if (!cfg.real.matrix.empty() && !cfg.real.events.empty()) {
        throw ConfigError("real.matrix and real.events are mutually exclusive");
    }
    if (kv.has("real.system")) cfg.real.system = parse_code_system(kv.require("real.system"));
    cfg.real.schema.patient_col = kv.get("real.patient_col", "patient_id");
    cfg.real.schema.code_col = kv.get("real.code_col", "code");
    cfg.real.schema.system_col = kv.get("real.system_col", "");
    cfg.real.schema.time_col = kv.get("real.time_col", "");
    for (const std::string& spec : kv.get_list("real.maps")) cfg.real.maps.push_back(parse_map_spec(spec));
    cfg.real.truncate_parents = kv.get_bool("real.truncate_parents", false);
    cfg.real.min_patients = static_cast<std::uint32_t>(kv.get_uint("real.min_patients", 0));
    cfg.real.fixed_vocab = kv.get("real.fixed_vocab", "");
    cfg.real.demographics = kv.get("real.demographics", "");
    cfg.real.cohort_filter = kv.get("real.cohort_filter", "");

    cfg.syn.matrix = kv.get("syn.matrix", "");
    cfg.syn.method = kv.get("syn.method", "");
    cfg.syn.m = kv.get_uint("syn.m", 50000);
    if (cfg.syn.matrix.empty() == cfg.syn.method.empty()) {
        throw ConfigError("config needs exactly one of syn.matrix or syn.method");
    }
    if (!cfg.syn.method.empty() && cfg.syn.method != "pbr" && cfg.syn.method != "resample") {
        throw ConfigError("syn.method must be pbr or resample");
    }

    cfg.fidelity_enabled = kv.get_bool("metrics.fidelity", true);
    cfg.utility_enabled = kv.get_bool("metrics.utility", true);
    cfg.privacy_enabled = kv.get_bool("metrics.privacy", true);

    cfg.fidelity_folds = static_cast<int>(kv.get_uint("fidelity.folds", 5));

    cfg.utility_outcome = kv.get("utility.outcome", "");
    cfg.utility_sweep = static_cast<int>(kv.get_uint("utility.sweep", 0));
    cfg.utility_stratified_split = kv.get_bool("utility.stratified_split", true);
    for (const std::string& task : kv.get_list("utility.analytical")) {
        const std::size_t colon = task.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("analytical task must be 'outcome:predictor', got '" + task + "'");
        }
        cfg.analytical_tasks.emplace_back(task.substr(0, colon), task.substr(colon + 1));
    }

    cfg.privacy_hist_bins = static_cast<int>(kv.get_uint("privacy.hist_bins", 50));
    cfg.privacy_n_balanced = static_cast<int>(kv.get_uint("privacy.n_balanced", 10));
    cfg.privacy_n_imbalanced = static_cast<int>(kv.get_uint("privacy.n_imbalanced", 10));
    const std::string rule = kv.get("privacy.imbalanced_rule", "farthest_from_half");
    if (rule == "farthest_from_half") cfg.privacy_imbalanced_rule = ImbalancedRule::FarthestFromHalf;
    else if (rule == "lowest_prevalence") cfg.privacy_imbalanced_rule = ImbalancedRule::LowestPrevalence;
    else throw ConfigError("privacy.imbalanced_rule must be farthest_from_half or lowest_prevalence");

    auto parse_grid = [&](const std::string& key, std::vector<std::uint64_t> fallback) {
        if (!kv.has(key)) return fallback;
        std::vector<std::uint64_t> grid;
        for (const std::string& tok : kv.get_list(key)) {
            try {
                grid.push_back(std::stoull(tok));
            } catch (const std::exception&) {
                throw ConfigError("grid value in '" + key + "' is not an integer: " + tok);
            }
        }
        if (grid.empty()) throw ConfigError("grid '" + key + "' is empty");
        return grid;
    };
    cfg.scale_m_grid = parse_grid(
        "scale.m_grid", {1000, 2000, 5000, 10000, 20000, 50000, 100000, 200000, 500000});
    cfg.scale_n_grid = parse_grid(
        "scale.n_grid", {1000, 2000, 5000, 10000, 15000, 20000, 25000, 30000, 35000, 40000});
    cfg.scale_replicates = static_cast<int>(kv.get_uint("scale.replicates", 5));
    if (cfg.scale_replicates < 1) throw ConfigError("scale.replicates must be >= 1");
    return cfg;
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["seed"] = std::to_string(seed);
    kv["report_format"] = report_format;
    kv["real.matrix"] = real.matrix.string();
    kv["real.events"] = real.events.string();
    kv["real.system"] = to_string(real.system);
    kv["real.patient_col"] = real.schema.patient_col;
    kv["real.code_col"] = real.schema.code_col;
    kv["real.system_col"] = real.schema.system_col;
    kv["real.time_col"] = real.schema.time_col;
    std::string maps;
    for (const MapSpec& m : real.maps) {
        if (!maps.empty()) maps += ' ';
        maps += to_string(m.source) + ":" + to_string(m.target) + ":" + m.path.string();
    }
    kv["real.maps"] = maps;
    kv["real.truncate_parents"] = real.truncate_parents ? "true" : "false";
    kv["real.min_patients"] = std::to_string(real.min_patients);
    kv["real.fixed_vocab"] = real.fixed_vocab.string();
    kv["real.demographics"] = real.demographics.string();
    kv["real.cohort_filter"] = real.cohort_filter;
    kv["syn.matrix"] = syn.matrix.string();
    kv["syn.method"] = syn.method;
    kv["syn.m"] = std::to_string(syn.m);
    kv["metrics.fidelity"] = fidelity_enabled ? "true" : "false";
    kv["metrics.utility"] = utility_enabled ? "true" : "false";
    kv["metrics.privacy"] = privacy_enabled ? "true" : "false";
    kv["fidelity.folds"] = std::to_string(fidelity_folds);
    kv["utility.outcome"] = utility_outcome;
    kv["utility.sweep"] = std::to_string(utility_sweep);
    kv["utility.stratified_split"] = utility_stratified_split ? "true" : "false";
    std::string tasks;
    for (const auto& [o, p] : analytical_tasks) {
        if (!tasks.empty()) tasks += ' ';
        tasks += o + ":" + p;
    }
    kv["utility.analytical"] = tasks;
    kv["privacy.hist_bins"] = std::to_string(privacy_hist_bins);
    kv["privacy.n_balanced"] = std::to_string(privacy_n_balanced);
    kv["privacy.n_imbalanced"] = std::to_string(privacy_n_imbalanced);
    kv["privacy.imbalanced_rule"] =
        privacy_imbalanced_rule == ImbalancedRule::FarthestFromHalf ? "farthest_from_half"
                                                                    : "lowest_prevalence";
    auto grid_string = [](const std::vector<std::uint64_t>& grid) {
        std::string out;
        for (std::uint64_t g : grid) {
            if (!out.empty()) out += ' ';
            out += std::to_string(g);
        }
        return out;
    };
    kv["scale.m_grid"] = grid_string(scale_m_grid);
    kv["scale.n_grid"] = grid_string(scale_n_grid);
    kv["scale.replicates"] = std::to_string(scale_replicates);
    // out_dir and workers are intentionally excluded: neither may influence
    // metric values, and the hash asserts that.

    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string fnv1a_hex(const std::string& content) {
    const std::uint64_t h = fnv1a(content);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

}  // namespace synthbench
