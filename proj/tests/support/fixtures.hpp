#pragma once

// Deterministic fixture builders shared by the unit and acceptance suites.

#include <cstdint>
#include <string>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"
#include "synthbench/rng.hpp"

namespace fixtures {

using synthbench::PhenotypeMatrix;
using synthbench::Rng;
using synthbench::Vocabulary;

inline std::vector<std::string> make_codes(std::size_t k, const std::string& prefix = "C") {
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < k; ++i) {
        std::string num = std::to_string(i);
        codes.push_back(prefix + std::string(4 - std::min<std::size_t>(4, num.size()), '0') + num);
    }
    return codes;
}

inline PhenotypeMatrix from_dense(const std::vector<std::vector<int>>& dense,
                                  std::vector<std::string> codes = {}) {
    const std::size_t k = dense.empty() ? 0 : dense[0].size();
    if (codes.empty()) codes = make_codes(k);
    std::vector<PhenotypeMatrix::Row> rows;
    for (const auto& r : dense) {
        PhenotypeMatrix::Row row;
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (r[j] != 0) row.push_back(static_cast<std::uint32_t>(j));
        }
        rows.push_back(std::move(row));
    }
    return PhenotypeMatrix(Vocabulary(std::move(codes)), std::move(rows));
}

// Independent Bernoulli columns with per-column prevalence drawn uniformly in
// [min_prev, max_prev]. Columns that come out constant are repaired by
// flipping one deterministic cell, so every column is usable by every metric.
inline PhenotypeMatrix random_matrix(std::uint64_t seed, std::size_t n, std::size_t k,
                                     double min_prev = 0.1, double max_prev = 0.9,
                                     const std::string& code_prefix = "C") {
    const Rng root(seed);
    std::vector<std::vector<int>> dense(n, std::vector<int>(k, 0));
    for (std::size_t j = 0; j < k; ++j) {
        const Rng col = root.stream(j);
        const double p = min_prev + (max_prev - min_prev) * col.unit_at(0);
        std::size_t ones = 0;
        for (std::size_t i = 0; i < n; ++i) {
            dense[i][j] = col.unit_at(i + 1) < p ? 1 : 0;
            ones += dense[i][j];
        }
        if (ones == 0) dense[col.below_at(n + 1, n)][j] = 1;
        if (ones == n) dense[col.below_at(n + 2, n)][j] = 0;
    }
    return from_dense(dense, make_codes(k, code_prefix));
}

// Columns 0 and 1 share a target Pearson correlation of 0.5 at prevalence
// 0.5 (joint cell probabilities 0.375/0.125/0.125/0.375); remaining columns
// are independent.
inline PhenotypeMatrix correlated_pair_matrix(std::uint64_t seed, std::size_t n, std::size_t k) {
    const Rng root(seed);
    std::vector<std::vector<int>> dense(n, std::vector<int>(k, 0));
    const Rng pair = root.stream("pair");
    for (std::size_t i = 0; i < n; ++i) {
        const double u = pair.unit_at(i);
        if (u < 0.375) {
            dense[i][0] = 1;
            dense[i][1] = 1;
        } else if (u < 0.5) {
            dense[i][0] = 1;
        } else if (u < 0.625) {
            dense[i][1] = 1;
        }
    }
    for (std::size_t j = 2; j < k; ++j) {
        const Rng col = root.stream(j);
        const double p = 0.1 + 0.7 * col.unit_at(0);
        for (std::size_t i = 0; i < n; ++i) dense[i][j] = col.unit_at(i + 1) < p ? 1 : 0;
    }
    return from_dense(dense);
}

// Rows realizing the 2x2 contingency table; column 0 is the outcome, column 1
// the predictor.
inline PhenotypeMatrix contingency_matrix(std::size_t n11, std::size_t n10, std::size_t n01,
                                          std::size_t n00, std::string outcome_code = "OUT",
                                          std::string predictor_code = "PRED") {
    std::vector<std::vector<int>> dense;
    for (std::size_t i = 0; i < n11; ++i) dense.push_back({1, 1});  // x=1, y=1
    for (std::size_t i = 0; i < n10; ++i) dense.push_back({0, 1});  // x=1, y=0
    for (std::size_t i = 0; i < n01; ++i) dense.push_back({1, 0});  // x=0, y=1
    for (std::size_t i = 0; i < n00; ++i) dense.push_back({0, 0});  // x=0, y=0
    return from_dense(dense, {std::move(outcome_code), std::move(predictor_code)});
}

// Sparse rows drawn from a pool of repeated patterns, the way real phenotype
// cohorts repeat common sparse profiles.
inline PhenotypeMatrix pattern_matrix(std::uint64_t seed, std::size_t n, std::size_t k,
                                      std::size_t n_patterns, double min_prev, double max_prev) {
    const PhenotypeMatrix patterns = random_matrix(seed, n_patterns, k, min_prev, max_prev);
    const Rng pick = Rng(seed).stream("assign");
    std::vector<PhenotypeMatrix::Row> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = patterns.row(pick.below_at(i, n_patterns));
    return PhenotypeMatrix(patterns.vocab(), std::move(rows));
}

// The shared 2000x100 fixture used by the acceptance suite.
inline PhenotypeMatrix acceptance_fixture() { return pattern_matrix(20240901, 2000, 100, 800, 0.02, 0.35); }

// Independent-column variant for the privacy leakage-ordering check.
inline PhenotypeMatrix independent_fixture() { return random_matrix(20240901, 2000, 100, 0.01, 0.3); }

}  // namespace fixtures
