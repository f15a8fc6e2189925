#include "synthbench/report.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "synthbench/error.hpp"

namespace synthbench {

namespace {

void flatten_into(const json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, json>>& out) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            flatten_into(node[i], prefix + "." + std::to_string(i), out);
        }
    } else {
        out.emplace_back(prefix, node);
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

const json* navigate(const json& doc, const std::string& dotted) {
    const json* node = &doc;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (node->is_object()) {
            auto it = node->find(key);
            if (it == node->end()) return nullptr;
            node = &*it;
        } else if (node->is_array()) {
            try {
                const std::size_t idx = std::stoul(key);
                if (idx >= node->size()) return nullptr;
                node = &(*node)[idx];
            } catch (const std::exception&) {
                return nullptr;
            }
        } else {
            return nullptr;
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return node;
}

void validate_node(const json& doc, const json& schema, const std::string& path, ValidationResult& out) {
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        bool ok = true;
        if (type == "object") ok = doc.is_object();
        else if (type == "array") ok = doc.is_array();
        else if (type == "string") ok = doc.is_string();
        else if (type == "integer") ok = doc.is_number_integer() || doc.is_number_unsigned();
        else if (type == "number") ok = doc.is_number();
        else if (type == "boolean") ok = doc.is_boolean();
        else if (type == "null") ok = doc.is_null();
        if (!ok) {
            out.ok = false;
            out.offending_paths.push_back(path.empty() ? "(root)" : path);
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const json& v : schema["enum"]) found = found || v == doc;
        if (!found) {
            out.ok = false;
            out.offending_paths.push_back(path.empty() ? "(root)" : path);
            return;
        }
    }
    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const json& key : schema["required"]) {
                if (!doc.contains(key.get<std::string>())) {
                    out.ok = false;
                    out.offending_paths.push_back((path.empty() ? "" : path + ".") + key.get<std::string>());
                }
            }
        }
        const bool closed = schema.contains("additionalProperties") &&
                            schema["additionalProperties"].is_boolean() &&
                            !schema["additionalProperties"].get<bool>();
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            const std::string child_path = (path.empty() ? "" : path + ".") + it.key();
            if (schema.contains("properties") && schema["properties"].contains(it.key())) {
                validate_node(it.value(), schema["properties"][it.key()], child_path, out);
            } else if (closed) {
                out.ok = false;
                out.offending_paths.push_back(child_path);
            }
        }
    }
    if (doc.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            validate_node(doc[i], schema["items"], path + "." + std::to_string(i), out);
        }
    }
}

}  // namespace

std::vector<std::pair<std::string, json>> flatten_leaves(const json& doc) {
    std::vector<std::pair<std::string, json>> out;
    flatten_into(doc, "", out);
    return out;
}

void write_json_atomic(const std::filesystem::path& path, const json& doc) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot open for writing: " + tmp.string());
        out << doc.dump(2) << '\n';
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open JSON file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw DataError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return doc;
}

void write_csv(const std::filesystem::path& path, const json& doc) {
    const auto leaves = flatten_leaves(doc);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot open for writing: " + tmp.string());
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            out << (i ? "," : "") << csv_escape(leaves[i].first);
        }
        out << '\n';
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (i) out << ',';
            const json& v = leaves[i].second;
            if (v.is_string()) out << csv_escape(v.get<std::string>());
            else if (v.is_null()) out << "";
            else out << v.dump();
        }
        out << '\n';
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ValidationResult validate_against_schema(const json& doc, const json& schema) {
    ValidationResult out;
    validate_node(doc, schema, "", out);
    return out;
}

json report_schema() {
    static const json schema = json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "synth-bench report",
  "type": "object",
  "required": ["tool", "config_hash", "seed", "metrics", "directions"],
  "properties": {
    "tool": {
      "type": "object",
      "required": ["name", "version"],
      "properties": {"name": {"type": "string"}, "version": {"type": "string"}}
    },
    "config_hash": {"type": "string"},
    "seed": {"type": "integer"},
    "datasets": {"type": "object"},
    "vocabulary": {
      "type": "object",
      "properties": {
        "shared_k": {"type": "integer"},
        "dropped_real": {"type": "array", "items": {"type": "string"}},
        "dropped_syn": {"type": "array", "items": {"type": "string"}}
      }
    },
    "options": {"type": "object"},
    "metrics": {
      "type": "object",
      "properties": {
        "fidelity": {
          "type": "object",
          "required": ["mmd", "rmspe", "mape", "cfd", "cofd"],
          "properties": {
            "mmd": {"type": "number"},
            "rmspe": {"type": "number"},
            "mape": {"type": "number"},
            "cfd": {"type": "number"},
            "cofd": {"type": "number"},
            "disc_auc": {"type": "number"},
            "disc_acc": {"type": "number"},
            "excluded_codes": {"type": "array", "items": {"type": "string"}},
            "constant_columns_real": {"type": "array", "items": {"type": "string"}},
            "constant_columns_syn": {"type": "array", "items": {"type": "string"}}
          }
        },
        "utility": {
          "type": "object",
          "properties": {
            "outcome": {"type": "string"},
            "predictive": {"type": "object"},
            "analytical": {
              "type": "array",
              "items": {
                "type": "object",
                "required": ["outcome", "predictor", "converged"],
                "properties": {
                  "outcome": {"type": "string"},
                  "predictor": {"type": "string"},
                  "converged": {"type": "boolean"}
                }
              }
            },
            "sweep": {"type": "object"}
          }
        },
        "privacy": {
          "type": "object",
          "properties": {
            "mir": {
              "type": "object",
              "required": ["mean", "median", "exact_match_fraction"],
              "properties": {
                "mean": {"type": "number"},
                "median": {"type": "number"},
                "exact_match_fraction": {"type": "number"},
                "excluded_zero_rows": {"type": "integer"},
                "hist_max": {"type": "number"},
                "histogram": {"type": "array", "items": {"type": "integer"}},
                "cdf": {"type": "array"}
              }
            },
            "air": {
              "type": "object",
              "required": ["f1"],
              "properties": {
                "f1": {"type": "number"},
                "balanced_codes": {"type": "array", "items": {"type": "string"}},
                "imbalanced_codes": {"type": "array", "items": {"type": "string"}},
                "imbalanced_rule": {"enum": ["farthest_from_half", "lowest_prevalence"]},
                "per_code_f1": {"type": "array"}
              }
            }
          }
        }
      }
    },
    "directions": {"type": "object"},
    "timing": {"type": "object"}
  }
})");
    return schema;
}

json strip_timing(const json& report) {
    json out = report;
    out.erase("timing");
    return out;
}

json direction_tags(const json& report) {
    static const std::vector<std::pair<const char*, const char*>> table = {
        {"metrics.fidelity.mmd", "lower"},
        {"metrics.fidelity.rmspe", "lower"},
        {"metrics.fidelity.mape", "lower"},
        {"metrics.fidelity.cfd", "lower"},
        {"metrics.fidelity.cofd", "lower"},
        {"metrics.fidelity.disc_auc", "lower"},
        {"metrics.fidelity.disc_acc", "lower"},
        {"metrics.utility.predictive.delta_auc_tstr", "higher"},
        {"metrics.utility.predictive.delta_acc_tstr", "higher"},
        {"metrics.utility.predictive.delta_auc_tsrtr", "higher"},
        {"metrics.utility.predictive.delta_acc_tsrtr", "higher"},
        {"metrics.privacy.mir.mean", "higher"},
        {"metrics.privacy.mir.median", "higher"},
        {"metrics.privacy.air.f1", "lower"},
    };
    json out = json::object();
    for (const auto& [path, dir] : table) {
        const json* v = navigate(report, path);
        if (v != nullptr && v->is_number()) out[path] = dir;
    }
    return out;
}

std::vector<RankedMethod> rank_methods(const std::vector<std::pair<std::string, json>>& reports,
                                       const std::map<std::string, double>& weights) {
    if (reports.empty()) throw DataError("no reports to rank");

    // All reports must agree on the ranked metric set (their direction tags).
    std::map<std::string, std::string> directions;
    for (auto it = reports[0].second.at("directions").begin(); it != reports[0].second.at("directions").end();
         ++it) {
        directions[it.key()] = it.value().get<std::string>();
    }
    for (const auto& [name, report] : reports) {
        std::vector<std::string> missing;
        for (const auto& [path, dir] : directions) {
            if (!report.contains("directions") || !report["directions"].contains(path)) missing.push_back(path);
        }
        for (auto it = report.at("directions").begin(); it != report.at("directions").end(); ++it) {
            if (directions.find(it.key()) == directions.end()) missing.push_back(it.key() + " (extra)");
        }
        if (!missing.empty()) {
            std::string msg = "report '" + name + "' metric set mismatch:";
            for (const std::string& m : missing) msg += " " + m;
            throw DataError(msg);
        }
    }

    std::map<std::string, double> effective_weights;
    if (weights.empty()) {
        for (const auto& [path, dir] : directions) effective_weights[path] = 1.0;
    } else {
        for (const auto& [path, w] : weights) {
            if (w < 0) throw ConfigError("negative weight for " + path);
            if (directions.find(path) == directions.end()) {
                throw ConfigError("weight refers to unknown metric '" + path + "'");
            }
            effective_weights[path] = w;
        }
        for (const auto& [path, dir] : directions) effective_weights.emplace(path, 0.0);
    }
    const double weight_sum =
        std::accumulate(effective_weights.begin(), effective_weights.end(), 0.0,
                        [](double acc, const auto& kv) { return acc + kv.second; });
    if (!(weight_sum > 0)) throw ConfigError("metric weights must sum to a positive value");

    std::vector<RankedMethod> ranked(reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) ranked[i].name = reports[i].first;

    for (const auto& [path, dir] : directions) {
        std::vector<double> values(reports.size());
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const json* v = navigate(reports[i].second, path);
            if (v == nullptr || !v->is_number()) {
                throw DataError("report '" + reports[i].first + "' lacks numeric metric " + path);
            }
            values[i] = v->get<double>();
        }
        // Direction-aware ranks, 1 = best, ties share the average rank.
        std::vector<std::size_t> order(reports.size());
        std::iota(order.begin(), order.end(), 0);
        const bool lower_better = dir == "lower";
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return lower_better ? values[a] < values[b] : values[a] > values[b];
        });
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
            const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t t = i; t <= j; ++t) ranked[order[t]].per_metric_rank[path] = avg_rank;
            i = j + 1;
        }
    }

    for (RankedMethod& r : ranked) {
        double total = 0.0;
        for (const auto& [path, w] : effective_weights) total += w * r.per_metric_rank[path];
        r.total_rank = total / weight_sum;
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedMethod& a, const RankedMethod& b) {
        if (a.total_rank != b.total_rank) return a.total_rank < b.total_rank;
        return a.name < b.name;
    });
    return ranked;
}

}  // namespace synthbench
