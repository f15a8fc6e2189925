#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

// Rows packed into 64-bit words for popcount-based Hamming distance scans.
// Optionally restricted to a subset of columns (remapped to bit positions
// 0..subset-1 in the given order).
class PackedRows {
public:
    explicit PackedRows(const PhenotypeMatrix& m);
    PackedRows(const PhenotypeMatrix& m, const std::vector<std::uint32_t>& columns);

    std::size_t n_rows() const { return n_; }
    std::size_t words_per_row() const { return words_per_row_; }
    const std::uint64_t* row(std::size_t i) const { return words_.data() + i * words_per_row_; }

    std::uint32_t popcount_row(std::size_t i) const;
    // Hamming distance between row i of this and row j of other (same packing width).
    std::uint32_t hamming(std::size_t i, const PackedRows& other, std::size_t j) const;

private:
    void pack(const PhenotypeMatrix& m, const std::vector<std::uint32_t>* columns);

    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

// B = X'X over the 0/1 matrix: b_{kk'} = number of rows with both k and k' set.
// Computed from sparse index pairs per row; row-parallel with commutative
// integer accumulation, so the result is exact and worker-count independent.
Eigen::MatrixXd cooccurrence_counts(const PhenotypeMatrix& m);

struct CorrelationMatrix {
    Eigen::MatrixXd corr;                          // K x K, diagonal fixed at 1
    std::vector<std::uint32_t> constant_columns;   // zero-variance columns; their off-diagonals are 0
};

// Pearson correlation of the binary columns, derived from co-occurrence
// counts and column sums.
CorrelationMatrix pearson_correlation(const PhenotypeMatrix& m);

}  // namespace synthbench
