#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

enum class CodeSystem { Icd9, Icd10, Snomed, PhecodeX };

CodeSystem parse_code_system(std::string_view tag);  // throws ConfigError on unknown tag
std::string to_string(CodeSystem s);

// One longitudinal diagnosis event. The timestamp is retained verbatim; the
// cross-sectional pipeline parses but does not interpret it.
struct Event {
    std::string patient_id;
    std::string code;
    CodeSystem system = CodeSystem::Icd9;
    std::string time;  // empty when absent
};

struct EventTable {
    std::vector<Event> rows;
    // Distinct patient ids in first-appearance order. Carried separately so
    // patients whose events are all dropped during mapping still yield an
    // all-zero row at aggregation.
    std::vector<std::string> patients;
    std::uint64_t dropped_empty_code = 0;
};

// Column-name configuration for event CSV files. system_col and time_col are
// optional; a per-row system column overrides the file-level default.
struct CsvSchema {
    std::string patient_col = "patient_id";
    std::string code_col = "code";
    std::string system_col;
    std::string time_col;
};

EventTable parse_events(std::istream& in, const CsvSchema& schema, CodeSystem default_system);

// Concatenate tables (rows and rosters), summing drop counts.
EventTable concat(std::vector<EventTable> tables);

// Re-expand a matrix into one event per 1-cell (supports generating in one
// coding system and mapping afterward).
EventTable expand_to_events(const PhenotypeMatrix& matrix, CodeSystem system);

// Strip everything from the first '.' onward: "CV_401.1" -> "CV_401".
std::string truncate_to_parent(std::string_view code);
// Apply truncate_to_parent to every event code in place.
void truncate_codes_to_parent(EventTable& events);

enum class VocabPolicy { FromData, Fixed };

struct AggregateOptions {
    VocabPolicy policy = VocabPolicy::FromData;
    // FromData: keep codes diagnosed in at least min_patients distinct
    // patients; columns ordered lexicographically by code.
    std::uint32_t min_patients = 0;
    // Fixed: codes outside the vocabulary are ignored.
    Vocabulary fixed_vocab;
};

// Collapse events to one row per roster patient; cell (i,k) = 1 iff patient i
// has at least one event with code k.
PhenotypeMatrix aggregate(const EventTable& events, const AggregateOptions& opts);

}  // namespace synthbench
