#include "synthbench/baselines.hpp"

#include <mutex>

#include "synthbench/error.hpp"
#include "synthbench/parallel.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

namespace {

std::vector<std::string> synthetic_ids(std::uint64_t m) {
    std::vector<std::string> ids;
    ids.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) ids.push_back("syn-" + std::to_string(i));
    return ids;
}

}  // namespace

PhenotypeMatrix generate_pbr(const std::vector<double>& prev, const Vocabulary& vocab,
                             const GenerationConfig& cfg) {
    if (prev.size() != vocab.size()) throw ConfigError("prevalence vector length does not match vocabulary");
    for (std::size_t k = 0; k < prev.size(); ++k) {
        if (!(prev[k] >= 0.0 && prev[k] <= 1.0)) {
            throw ConfigError("prevalence out of [0,1] at column " + std::to_string(k));
        }
    }
    const std::uint64_t m = cfg.target_size;
    const Rng root(cfg.seed);

    std::vector<PhenotypeMatrix::Row> rows(m);
    // Column-parallel: column k draws from substream k at counters 0..M-1;
    // per-column hits are merged into rows under a lock, then each row is
    // sorted by the matrix constructor. The hit set is independent of the
    // worker count by construction.
    std::mutex merge_mutex;
    parallel_for_blocks(prev.size(), [&](std::size_t col_begin, std::size_t col_end) {
        std::vector<std::vector<std::uint64_t>> hits_per_col(col_end - col_begin);
        for (std::size_t k = col_begin; k < col_end; ++k) {
            const Rng col_rng = root.stream(static_cast<std::uint64_t>(k));
            const double p = prev[k];
            if (p == 0.0) continue;
            auto& hits = hits_per_col[k - col_begin];
            for (std::uint64_t i = 0; i < m; ++i) {
                if (col_rng.unit_at(i) < p) hits.push_back(i);
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t k = col_begin; k < col_end; ++k) {
            for (std::uint64_t i : hits_per_col[k - col_begin]) {
                rows[i].push_back(static_cast<std::uint32_t>(k));
            }
        }
    });
    return PhenotypeMatrix(vocab, std::move(rows), synthetic_ids(m));
}

PhenotypeMatrix generate_pbr(const PhenotypeMatrix& real, const GenerationConfig& cfg) {
    return generate_pbr(prevalence(real), real.vocab(), cfg);
}

PhenotypeMatrix generate_resample(const PhenotypeMatrix& real, const GenerationConfig& cfg) {
    if (real.n_rows() == 0) throw DataError("cannot resample from an empty matrix");
    const std::uint64_t m = cfg.target_size;
    const std::uint64_t n = real.n_rows();
    const Rng rng = Rng(cfg.seed).stream("resample");

    std::vector<PhenotypeMatrix::Row> rows(m);
    parallel_for_blocks(m, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            rows[i] = real.row(rng.below_at(i, n));
        }
    });
    return PhenotypeMatrix(real.vocab(), std::move(rows), synthetic_ids(m));
}

}  // namespace synthbench
