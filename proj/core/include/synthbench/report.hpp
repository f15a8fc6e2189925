#pragma once

#include <filesystem>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

namespace synthbench {

using json = nlohmann::json;

// Every scalar leaf as (dotted.path, value); array elements use numeric keys.
std::vector<std::pair<std::string, json>> flatten_leaves(const json& doc);

// Atomic write: serialize to <path>.tmp then rename.
void write_json_atomic(const std::filesystem::path& path, const json& doc);
json load_json(const std::filesystem::path& path);

// Flatten the document into a two-line CSV (header of dotted paths + values).
void write_csv(const std::filesystem::path& path, const json& doc);

// Structural validation against the subset of JSON Schema used by
// schemas/report.schema.json: type, properties, required, items, enum,
// additionalProperties.
struct ValidationResult {
    bool ok = true;
    std::vector<std::string> offending_paths;
};
ValidationResult validate_against_schema(const json& doc, const json& schema);

// The report schema shipped with the tool.
json report_schema();

// The metric block of a report with the timing block stripped; used by the
// determinism checks ("metric blocks" = everything except timing).
json strip_timing(const json& report);

// Direction tags for every rankable scalar (dotted path -> "higher"/"lower").
// Only paths present in the report are emitted.
json direction_tags(const json& report);

// Direction-aware weighted rank aggregation across method reports. Ties share
// the average rank; total ties order alphabetically by method name.
struct RankedMethod {
    std::string name;
    double total_rank = 0.0;
    std::map<std::string, double> per_metric_rank;
};
std::vector<RankedMethod> rank_methods(const std::vector<std::pair<std::string, json>>& reports,
                                       const std::map<std::string, double>& weights = {});

}  // namespace synthbench
