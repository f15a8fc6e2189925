#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace synthbench {

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // length n, fold index in [0, k)
    std::vector<std::string> warnings;

    std::vector<std::size_t> fold_indices(int fold) const;
    std::vector<std::size_t> complement_indices(int fold) const;
};

// Stratified assignment: per class, a seeded shuffle followed by round-robin
// fold assignment, so per-fold class counts differ by at most one.
FoldPlan stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

}  // namespace synthbench
