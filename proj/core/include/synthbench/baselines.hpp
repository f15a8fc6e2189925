#pragma once

#include <cstdint>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

struct GenerationConfig {
    std::uint64_t target_size = 50000;  // M
    std::uint64_t seed = 0;
};

// Prevalence-based random baseline: cell (i,k) is an independent Bernoulli
// draw with success probability prev[k]. Each column consumes its own counter
// RNG stream, so K-parallel generation is reproducible.
PhenotypeMatrix generate_pbr(const std::vector<double>& prev, const Vocabulary& vocab,
                             const GenerationConfig& cfg);
PhenotypeMatrix generate_pbr(const PhenotypeMatrix& real, const GenerationConfig& cfg);

// Resample baseline: M rows drawn uniformly with replacement from the real
// rows (a bootstrap); vocabulary shared.
PhenotypeMatrix generate_resample(const PhenotypeMatrix& real, const GenerationConfig& cfg);

}  // namespace synthbench
