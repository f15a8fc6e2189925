#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthbench/events.hpp"
#include "synthbench/privacy.hpp"

namespace synthbench {

// Flat "key = value" file with '#' comments; dotted keys group settings.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::filesystem::path& path);
    static KeyValueFile parse_string(const std::string& content);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // whitespace-separated

    const std::map<std::string, std::string>& values() const { return values_; }
    // Unknown keys typically mean a typo; callers pass the set they understand.
    void reject_unknown_keys(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> values_;
};

struct MapSpec {
    CodeSystem source;
    CodeSystem target;
    std::filesystem::path path;
};
// "icd9:icd10:/path/to/map.tsv"
MapSpec parse_map_spec(const std::string& spec);

struct DatasetConfig {
    std::filesystem::path matrix;  // pre-aggregated matrix, or:
    std::filesystem::path events;  // event CSV to ingest
    CodeSystem system = CodeSystem::Icd9;
    CsvSchema schema;
    std::vector<MapSpec> maps;
    bool truncate_parents = false;
    std::uint32_t min_patients = 0;
    std::filesystem::path fixed_vocab;  // optional code-per-line file
    std::filesystem::path demographics;
    std::string cohort_filter;
};

struct SyntheticConfig {
    std::filesystem::path matrix;  // external method: pre-generated matrix
    std::string method;            // or built-in baseline: "pbr" / "resample"
    std::uint64_t m = 50000;
};

struct RunConfig {
    std::uint64_t seed = 0;
    unsigned workers = 0;  // 0 = hardware concurrency
    std::filesystem::path out_dir = "out";
    std::string report_format = "json";  // json | csv | both

    DatasetConfig real;
    SyntheticConfig syn;

    bool fidelity_enabled = true;
    bool utility_enabled = true;
    bool privacy_enabled = true;

    int fidelity_folds = 5;

    std::string utility_outcome;  // empty = most prevalent real code
    int utility_sweep = 0;        // 0 = off
    bool utility_stratified_split = true;
    std::vector<std::pair<std::string, std::string>> analytical_tasks;  // (outcome spec, predictor)

    int privacy_hist_bins = 50;
    int privacy_n_balanced = 10;
    int privacy_n_imbalanced = 10;
    ImbalancedRule privacy_imbalanced_rule = ImbalancedRule::FarthestFromHalf;

    std::vector<std::uint64_t> scale_m_grid;  // defaults installed by from_file
    std::vector<std::uint64_t> scale_n_grid;
    int scale_replicates = 5;

    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_key_values(const KeyValueFile& kv);

    // Effective config as sorted key=value lines; its FNV-1a hash is embedded
    // in every report.
    std::string canonical() const;
    std::string hash() const;
};

std::string fnv1a_hex(const std::string& content);

}  // namespace synthbench
