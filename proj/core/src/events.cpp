#include "synthbench/events.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "synthbench/error.hpp"

namespace synthbench {

CodeSystem parse_code_system(std::string_view tag) {
    std::string t(tag);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "icd9" || t == "icd-9") return CodeSystem::Icd9;
    if (t == "icd10" || t == "icd-10") return CodeSystem::Icd10;
    if (t == "snomed" || t == "snomed-ct") return CodeSystem::Snomed;
    if (t == "phecodex" || t == "phecode_x" || t == "phecode") return CodeSystem::PhecodeX;
    throw ConfigError("unknown coding system tag: '" + std::string(tag) + "'");
}

std::string to_string(CodeSystem s) {
    switch (s) {
        case CodeSystem::Icd9: return "icd9";
        case CodeSystem::Icd10: return "icd10";
        case CodeSystem::Snomed: return "snomed";
        case CodeSystem::PhecodeX: return "phecodex";
    }
    return "unknown";
}

namespace {

// RFC-4180-ish line splitter: quoted fields, "" escapes, embedded commas.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // tolerate CRLF
        } else {
            field += c;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", lineno);
    fields.push_back(std::move(field));
    return fields;
}

std::size_t require_column(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("configured column '" + name + "' not found in CSV header");
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

EventTable parse_events(std::istream& in, const CsvSchema& schema, CodeSystem default_system) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("missing CSV header row", 1);
    ++lineno;
    const std::vector<std::string> header = split_csv_line(line, lineno);

    const std::size_t patient_idx = require_column(header, schema.patient_col);
    const std::size_t code_idx = require_column(header, schema.code_col);
    const bool has_system = !schema.system_col.empty();
    const bool has_time = !schema.time_col.empty();
    const std::size_t system_idx = has_system ? require_column(header, schema.system_col) : 0;
    const std::size_t time_idx = has_time ? require_column(header, schema.time_col) : 0;

    EventTable table;
    std::unordered_set<std::string> seen_patients;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line, lineno);
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                                 std::to_string(fields.size()),
                             lineno);
        }
        const std::string& pid = fields[patient_idx];
        if (pid.empty()) throw ParseError("empty patient id", lineno);
        if (seen_patients.insert(pid).second) table.patients.push_back(pid);

        const std::string& code = fields[code_idx];
        if (code.empty()) {
            ++table.dropped_empty_code;
            continue;
        }
        Event ev;
        ev.patient_id = pid;
        ev.code = code;
        ev.system = has_system && !fields[system_idx].empty() ? parse_code_system(fields[system_idx])
                                                              : default_system;
        if (has_time) ev.time = fields[time_idx];
        table.rows.push_back(std::move(ev));
    }
    return table;
}

EventTable concat(std::vector<EventTable> tables) {
    EventTable out;
    std::unordered_set<std::string> seen;
    for (EventTable& t : tables) {
        out.dropped_empty_code += t.dropped_empty_code;
        for (std::string& p : t.patients) {
            if (seen.insert(p).second) out.patients.push_back(std::move(p));
        }
        out.rows.insert(out.rows.end(), std::make_move_iterator(t.rows.begin()),
                        std::make_move_iterator(t.rows.end()));
    }
    return out;
}

EventTable expand_to_events(const PhenotypeMatrix& matrix, CodeSystem system) {
    EventTable out;
    out.patients.reserve(matrix.n_rows());
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const std::string pid =
            matrix.patient_ids().empty() ? "r" + std::to_string(i) : matrix.patient_ids()[i];
        out.patients.push_back(pid);
        for (std::uint32_t c : matrix.row(i)) {
            out.rows.push_back({pid, matrix.vocab().code(c), system, ""});
        }
    }
    return out;
}

std::string truncate_to_parent(std::string_view code) {
    const std::size_t dot = code.find('.');
    return std::string(code.substr(0, dot));
}

void truncate_codes_to_parent(EventTable& events) {
    for (Event& ev : events.rows) ev.code = truncate_to_parent(ev.code);
}

PhenotypeMatrix aggregate(const EventTable& events, const AggregateOptions& opts) {
    if (opts.policy == VocabPolicy::Fixed && opts.fixed_vocab.empty()) {
        throw ConfigError("fixed vocabulary is empty");
    }
    for (const Event& ev : events.rows) {
        if (ev.system != events.rows.front().system) {
            throw DataError("aggregation requires events in a single coding system, found " +
                            to_string(events.rows.front().system) + " and " + to_string(ev.system));
        }
    }

    // Per-patient set of codes, rows in roster order.
    std::unordered_map<std::string, std::size_t> patient_row;
    patient_row.reserve(events.patients.size());
    for (std::size_t i = 0; i < events.patients.size(); ++i) patient_row.emplace(events.patients[i], i);

    std::vector<std::set<std::string>> codes_per_patient(events.patients.size());
    for (const Event& ev : events.rows) {
        auto it = patient_row.find(ev.patient_id);
        if (it == patient_row.end()) {
            // Event for a patient missing from the roster: repair the roster.
            it = patient_row.emplace(ev.patient_id, codes_per_patient.size()).first;
            codes_per_patient.emplace_back();
        }
        codes_per_patient[it->second].insert(ev.code);
    }

    Vocabulary vocab;
    if (opts.policy == VocabPolicy::FromData) {
        // Support = number of distinct patients with the code.
        std::map<std::string, std::uint32_t> support;
        for (const auto& codes : codes_per_patient) {
            for (const std::string& c : codes) ++support[c];
        }
        std::vector<std::string> kept;
        for (const auto& [code, count] : support) {
            if (count >= opts.min_patients) kept.push_back(code);
        }
        // std::map iteration is already lexicographic.
        vocab = Vocabulary(std::move(kept));
    } else {
        vocab = opts.fixed_vocab;
    }

    std::vector<PhenotypeMatrix::Row> rows(codes_per_patient.size());
    for (std::size_t i = 0; i < codes_per_patient.size(); ++i) {
        for (const std::string& c : codes_per_patient[i]) {
            if (auto idx = vocab.index_of(c)) rows[i].push_back(*idx);
        }
    }

    std::vector<std::string> ids = events.patients;
    ids.resize(rows.size());  // roster repair above may have appended rows
    for (const auto& [pid, row] : patient_row) {
        if (row < ids.size() && ids[row].empty()) ids[row] = pid;
    }
    return PhenotypeMatrix(std::move(vocab), std::move(rows), std::move(ids));
}

}  // namespace synthbench
