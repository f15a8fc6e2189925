#include "synthbench/kernels.hpp"

#include <bit>
#include <cmath>
#include <mutex>

#include "synthbench/error.hpp"
#include "synthbench/parallel.hpp"

namespace synthbench {

PackedRows::PackedRows(const PhenotypeMatrix& m) { pack(m, nullptr); }

PackedRows::PackedRows(const PhenotypeMatrix& m, const std::vector<std::uint32_t>& columns) {
    pack(m, &columns);
}

void PackedRows::pack(const PhenotypeMatrix& m, const std::vector<std::uint32_t>* columns) {
    n_ = m.n_rows();
    if (columns == nullptr) {
        k_ = m.n_cols();
        words_per_row_ = (k_ + 63) / 64;
        words_.assign(n_ * words_per_row_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            std::uint64_t* w = words_.data() + i * words_per_row_;
            for (std::uint32_t c : m.row(i)) w[c >> 6] |= 1ull << (c & 63);
        }
    } else {
        k_ = columns->size();
        words_per_row_ = (k_ + 63) / 64;
        words_.assign(std::max<std::size_t>(1, n_ * words_per_row_), 0);
        // column index -> bit position, or sentinel for excluded
        std::vector<std::uint32_t> remap(m.n_cols(), UINT32_MAX);
        for (std::uint32_t bit = 0; bit < columns->size(); ++bit) remap[(*columns)[bit]] = bit;
        for (std::size_t i = 0; i < n_; ++i) {
            std::uint64_t* w = words_.data() + i * words_per_row_;
            for (std::uint32_t c : m.row(i)) {
                const std::uint32_t bit = remap[c];
                if (bit != UINT32_MAX) w[bit >> 6] |= 1ull << (bit & 63);
            }
        }
    }
}

std::uint32_t PackedRows::popcount_row(std::size_t i) const {
    const std::uint64_t* w = row(i);
    std::uint32_t total = 0;
    for (std::size_t b = 0; b < words_per_row_; ++b) total += std::popcount(w[b]);
    return total;
}

std::uint32_t PackedRows::hamming(std::size_t i, const PackedRows& other, std::size_t j) const {
    const std::uint64_t* a = row(i);
    const std::uint64_t* b = other.row(j);
    std::uint32_t total = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) total += std::popcount(a[w] ^ b[w]);
    return total;
}

Eigen::MatrixXd cooccurrence_counts(const PhenotypeMatrix& m) {
    const std::size_t k = m.n_cols();
    if (k == 0) throw DataError("co-occurrence undefined for K=0");

    std::vector<std::uint64_t> upper(k * k, 0);  // only (a <= b) cells used
    std::mutex merge_mutex;
    parallel_for_blocks(m.n_rows(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> local(k * k, 0);
        for (std::size_t i = begin; i < end; ++i) {
            const auto& r = m.row(i);
            for (std::size_t a = 0; a < r.size(); ++a) {
                const std::size_t base = static_cast<std::size_t>(r[a]) * k;
                for (std::size_t b = a; b < r.size(); ++b) ++local[base + r[b]];
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t c = 0; c < local.size(); ++c) upper[c] += local[c];
    });

    Eigen::MatrixXd out(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            const double v = static_cast<double>(upper[a * k + b]);
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
            out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
        }
    }
    return out;
}

CorrelationMatrix pearson_correlation(const PhenotypeMatrix& m) {
    const Eigen::Index k = static_cast<Eigen::Index>(m.n_cols());
    if (k == 0) throw DataError("correlation undefined for K=0");
    if (m.n_rows() == 0) throw DataError("correlation undefined for N=0");
    const double n = static_cast<double>(m.n_rows());

    const Eigen::MatrixXd b = cooccurrence_counts(m);
    // For binary data the diagonal of X'X is the column sum.
    Eigen::VectorXd s(k), var_term(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        s(j) = b(j, j);
        var_term(j) = n * s(j) - s(j) * s(j);  // n^2 * variance estimate
    }

    CorrelationMatrix result;
    result.corr = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (var_term(j) == 0.0) result.constant_columns.push_back(static_cast<std::uint32_t>(j));
    }
    for (Eigen::Index a = 0; a < k; ++a) {
        if (var_term(a) == 0.0) continue;
        for (Eigen::Index c = a + 1; c < k; ++c) {
            if (var_term(c) == 0.0) continue;
            const double r = (n * b(a, c) - s(a) * s(c)) / std::sqrt(var_term(a)) / std::sqrt(var_term(c));
            result.corr(a, c) = r;
            result.corr(c, a) = r;
        }
    }
    return result;
}

}  // namespace synthbench
