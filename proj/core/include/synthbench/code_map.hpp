#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "synthbench/events.hpp"

namespace synthbench {

// One-to-many mapping between coding systems, loaded from a TSV of
// "source_code<TAB>target_code" pairs (one pair per line, no header).
class CodeMap {
public:
    CodeMap(CodeSystem source, CodeSystem target) : source_(source), target_(target) {}

    static CodeMap load_tsv(const std::filesystem::path& path, CodeSystem source, CodeSystem target);

    void add(const std::string& source_code, const std::string& target_code);

    // nullptr when the code is absent; present keys always map to >= 1 target.
    const std::vector<std::string>* lookup(const std::string& code) const {
        auto it = table_.find(code);
        return it == table_.end() ? nullptr : &it->second;
    }

    CodeSystem source() const { return source_; }
    CodeSystem target() const { return target_; }
    std::size_t size() const { return table_.size(); }

private:
    CodeSystem source_;
    CodeSystem target_;
    std::unordered_map<std::string, std::vector<std::string>> table_;
};

struct MapStageReport {
    CodeSystem source;
    CodeSystem target;
    std::uint64_t events_in = 0;
    std::uint64_t events_out = 0;
    std::uint64_t events_dropped = 0;
    std::map<std::string, std::uint64_t> unmapped;  // distinct code -> occurrence count
};

struct MapResult {
    EventTable events;
    std::vector<MapStageReport> stages;
};

// Chain events through the maps in order. Each event expands to one output
// event per target code; events whose code is absent from the stage map are
// dropped and reported per distinct code.
MapResult map_codes(const EventTable& events, const std::vector<CodeMap>& maps);

}  // namespace synthbench
