#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "synthbench/vocabulary.hpp"

namespace synthbench {

// N x K binary presence/absence matrix stored as sorted index sets per row.
// The universal currency of all metrics: houses both the real (N x K) and
// synthetic (M x K) datasets.
class PhenotypeMatrix {
public:
    using Row = std::vector<std::uint32_t>;

    PhenotypeMatrix() = default;
    // Rows are normalized on construction: sorted, deduplicated, bounds-checked.
    PhenotypeMatrix(Vocabulary vocab, std::vector<Row> rows, std::vector<std::string> patient_ids = {});

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return vocab_.size(); }

    const Vocabulary& vocab() const { return vocab_; }
    const Row& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<Row>& rows() const { return rows_; }
    bool cell(std::size_t i, std::uint32_t k) const;

    // Empty when rows were built without ids, otherwise length n_rows().
    const std::vector<std::string>& patient_ids() const { return patient_ids_; }

    // Count of ones per column.
    std::vector<std::uint64_t> column_counts() const;

    // Sparse text format:
    //   K <int>
    //   vocab <codes space-separated>
    //   <patient_id> idx1 idx2 ...
    void write_sparse(std::ostream& out) const;
    static PhenotypeMatrix read_sparse(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static PhenotypeMatrix load(const std::filesystem::path& path);

    // Dense 0/1 CSV with a patient_id column and one column per code.
    void write_dense_csv(std::ostream& out) const;

    friend bool operator==(const PhenotypeMatrix& a, const PhenotypeMatrix& b) {
        return a.vocab_ == b.vocab_ && a.rows_ == b.rows_ && a.patient_ids_ == b.patient_ids_;
    }

private:
    Vocabulary vocab_;
    std::vector<Row> rows_;
    std::vector<std::string> patient_ids_;
};

// Column means of the binary matrix. Undefined for N = 0 (throws DataError).
std::vector<double> prevalence(const PhenotypeMatrix& m);

// Restrict both matrices to the (sorted) intersection of their vocabularies.
struct VocabularyAlignment {
    PhenotypeMatrix real;
    PhenotypeMatrix syn;
    std::vector<std::string> dropped_real;
    std::vector<std::string> dropped_syn;
};
VocabularyAlignment align_to_intersection(const PhenotypeMatrix& real, const PhenotypeMatrix& syn);

}  // namespace synthbench
