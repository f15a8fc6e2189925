#include "synthbench/code_map.hpp"

#include <algorithm>
#include <fstream>

#include "synthbench/error.hpp"

namespace synthbench {

void CodeMap::add(const std::string& source_code, const std::string& target_code) {
    if (source_code.empty() || target_code.empty()) throw DataError("empty code in mapping entry");
    std::vector<std::string>& targets = table_[source_code];
    if (std::find(targets.begin(), targets.end(), target_code) == targets.end()) {
        targets.push_back(target_code);
    }
}

CodeMap CodeMap::load_tsv(const std::filesystem::path& path, CodeSystem source, CodeSystem target) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open mapping file: " + path.string());
    CodeMap map(source, target);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw ParseError("expected exactly two tab-separated columns", lineno);
        }
        const std::string src = line.substr(0, tab);
        const std::string dst = line.substr(tab + 1);
        if (src.empty() || dst.empty()) throw ParseError("empty source or target code", lineno);
        map.add(src, dst);
    }
    return map;
}

MapResult map_codes(const EventTable& events, const std::vector<CodeMap>& maps) {
    MapResult result;
    result.events.patients = events.patients;
    result.events.dropped_empty_code = events.dropped_empty_code;

    std::vector<Event> current = events.rows;
    for (const CodeMap& map : maps) {
        MapStageReport stage;
        stage.source = map.source();
        stage.target = map.target();
        stage.events_in = current.size();

        std::vector<Event> next;
        next.reserve(current.size());
        for (const Event& ev : current) {
            if (ev.system != map.source()) {
                throw DataError("mapping stage expects " + to_string(map.source()) + " events, found " +
                                to_string(ev.system) + " (code '" + ev.code + "')");
            }
            const std::vector<std::string>* targets = map.lookup(ev.code);
            if (targets == nullptr) {
                ++stage.events_dropped;
                ++stage.unmapped[ev.code];
                continue;
            }
            for (const std::string& t : *targets) {
                Event out = ev;
                out.code = t;
                out.system = map.target();
                next.push_back(std::move(out));
            }
        }
        stage.events_out = next.size();
        result.stages.push_back(std::move(stage));
        current = std::move(next);
    }
    result.events.rows = std::move(current);
    return result;
}

}  // namespace synthbench
