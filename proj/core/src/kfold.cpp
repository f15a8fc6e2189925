#include "synthbench/kfold.hpp"

#include <map>

#include "synthbench/error.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

std::vector<std::size_t> FoldPlan::fold_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::complement_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold requires k >= 2");
    if (static_cast<std::size_t>(k) > labels.size()) {
        throw ConfigError("k=" + std::to_string(k) + " exceeds n=" + std::to_string(labels.size()));
    }

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(labels.size(), 0);
    const Rng root(seed);
    // The fold cursor continues across classes so total fold sizes stay
    // balanced too (k = n degenerates to leave-one-out).
    std::size_t cursor = 0;
    for (auto& [label, indices] : by_class) {
        if (indices.size() < static_cast<std::size_t>(k)) {
            plan.warnings.push_back("class " + std::to_string(label) + " has " +
                                    std::to_string(indices.size()) + " samples, fewer than k=" +
                                    std::to_string(k));
        }
        Rng class_rng = root.stream(static_cast<std::uint64_t>(label) + 1);
        deterministic_shuffle(indices, class_rng);
        for (std::size_t pos = 0; pos < indices.size(); ++pos) {
            plan.assignments[indices[pos]] = static_cast<int>(cursor++ % static_cast<std::size_t>(k));
        }
    }
    return plan;
}

}  // namespace synthbench
