#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace synthbench {

// Ordered list of distinct phenotype codes. Column k of a PhenotypeMatrix is
// the code at index k; the order is part of the serialized format.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> codes);

    std::size_t size() const { return codes_.size(); }
    bool empty() const { return codes_.empty(); }

    const std::string& code(std::uint32_t index) const { return codes_.at(index); }
    const std::vector<std::string>& codes() const { return codes_; }

    std::optional<std::uint32_t> index_of(const std::string& code) const {
        auto it = index_.find(code);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const std::string& code) const { return index_.count(code) != 0; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.codes_ == b.codes_; }

private:
    std::vector<std::string> codes_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace synthbench
