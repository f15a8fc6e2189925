#include "synthbench/vocabulary.hpp"

#include "synthbench/error.hpp"

namespace synthbench {

Vocabulary::Vocabulary(std::vector<std::string> codes) : codes_(std::move(codes)) {
    index_.reserve(codes_.size());
    for (std::uint32_t i = 0; i < codes_.size(); ++i) {
        const std::string& c = codes_[i];
        if (c.empty()) throw DataError("vocabulary contains an empty code");
        if (!index_.emplace(c, i).second) throw DataError("duplicate code in vocabulary: " + c);
    }
}

}  // namespace synthbench
