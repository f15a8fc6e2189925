#include "synthbench/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "synthbench/error.hpp"
#include "synthbench/kernels.hpp"
#include "synthbench/parallel.hpp"

namespace synthbench {

namespace {

void require_compatible(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    if (!(real.vocab() == syn.vocab())) {
        throw DataError("real and synthetic matrices must share a vocabulary");
    }
    if (syn.n_rows() == 0) throw DataError("synthetic matrix is empty");
}

}  // namespace

MirResult mir(const PhenotypeMatrix& real, const PhenotypeMatrix& syn, const MirOptions& opts) {
    require_compatible(real, syn);
    if (opts.hist_bins < 1) throw ConfigError("histogram needs at least one bin");

    // Binary rows: Euclidean distance = sqrt(Hamming count).
    const PackedRows preal(real);
    const PackedRows psyn(syn);

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < real.n_rows(); ++i) {
        if (!real.row(i).empty()) kept.push_back(i);
    }

    MirResult result;
    result.excluded_zero_rows = real.n_rows() - kept.size();
    result.distances.assign(kept.size(), 0.0);

    std::vector<std::uint32_t> min_hamming(kept.size(), 0);
    parallel_for_blocks(kept.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const std::size_t i = kept[t];
            std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
            for (std::size_t j = 0; j < psyn.n_rows(); ++j) {
                const std::uint32_t h = preal.hamming(i, psyn, j);
                if (h < best) {
                    best = h;
                    if (best == 0) break;
                }
            }
            min_hamming[t] = best;
        }
    });

    std::uint64_t exact = 0;
    for (std::size_t t = 0; t < kept.size(); ++t) {
        result.distances[t] = std::sqrt(static_cast<double>(min_hamming[t]));
        if (min_hamming[t] == 0) ++exact;
    }
    if (!kept.empty()) {
        result.exact_match_fraction = static_cast<double>(exact) / static_cast<double>(kept.size());
        double sum = 0.0;
        for (double d : result.distances) sum += d;
        result.mean = sum / static_cast<double>(kept.size());
        std::vector<double> sorted = result.distances;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        result.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

        result.hist_max = sorted.back();
        result.histogram.assign(static_cast<std::size_t>(opts.hist_bins), 0);
        const double width = result.hist_max > 0 ? result.hist_max / opts.hist_bins : 1.0;
        for (double d : sorted) {
            std::size_t bin = static_cast<std::size_t>(d / width);
            if (bin >= result.histogram.size()) bin = result.histogram.size() - 1;  // d == max
            ++result.histogram[bin];
        }
        // CDF at every distinct distance.
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
            result.cdf.emplace_back(sorted[i], static_cast<double>(j + 1) / static_cast<double>(n));
            i = j + 1;
        }
    }
    return result;
}

namespace {

// Selection ranks columns by distance from 0.5 prevalence; ties break on the
// lower column index for determinism.
std::vector<std::uint32_t> pick_columns(const std::vector<double>& prev,
                                        const std::vector<char>& taken, std::size_t count,
                                        bool ascending, bool nonzero_only, ImbalancedRule rule) {
    std::vector<std::uint32_t> order;
    for (std::uint32_t k = 0; k < prev.size(); ++k) {
        if (taken[k]) continue;
        if (nonzero_only && prev[k] == 0.0) continue;
        order.push_back(k);
    }
    auto key = [&](std::uint32_t k) {
        if (rule == ImbalancedRule::LowestPrevalence) return prev[k];
        return std::abs(prev[k] - 0.5);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ka = key(a), kb = key(b);
        if (ka != kb) return ascending ? ka < kb : ka > kb;
        return a < b;
    });
    if (order.size() > count) order.resize(count);
    return order;
}

}  // namespace

AirResult air(const PhenotypeMatrix& real, const PhenotypeMatrix& syn, const AirOptions& opts) {
    require_compatible(real, syn);
    if (opts.n_balanced < 0 || opts.n_imbalanced < 0) throw ConfigError("negative attribute counts");
    const std::size_t n_hidden = static_cast<std::size_t>(opts.n_balanced + opts.n_imbalanced);
    if (real.n_cols() <= n_hidden) {
        throw ConfigError("need K > " + std::to_string(n_hidden) + " columns, have " +
                          std::to_string(real.n_cols()));
    }
    if (real.n_rows() == 0) throw DataError("real matrix is empty");

    const std::vector<double> prev = prevalence(real);
    std::vector<char> taken(prev.size(), 0);

    // Balanced: closest to 0.5 prevalence.
    const std::vector<std::uint32_t> balanced =
        pick_columns(prev, taken, static_cast<std::size_t>(opts.n_balanced), /*ascending=*/true,
                     /*nonzero_only=*/false, ImbalancedRule::FarthestFromHalf);
    for (std::uint32_t k : balanced) taken[k] = 1;

    // Imbalanced: per the configured rule, restricted to nonzero prevalence;
    // overlaps with the balanced picks are skipped down the ranking.
    const bool ascending = opts.imbalanced_rule == ImbalancedRule::LowestPrevalence;
    const std::vector<std::uint32_t> imbalanced =
        pick_columns(prev, taken, static_cast<std::size_t>(opts.n_imbalanced), ascending,
                     /*nonzero_only=*/true, opts.imbalanced_rule);
    if (imbalanced.size() < static_cast<std::size_t>(opts.n_imbalanced)) {
        std::size_t nonzero = 0;
        for (double p : prev) nonzero += p > 0.0 ? 1 : 0;
        throw DataError("only " + std::to_string(nonzero) + " distinct nonzero-prevalence codes; need " +
                        std::to_string(n_hidden) + " hidden attributes");
    }
    for (std::uint32_t k : imbalanced) taken[k] = 1;

    std::vector<std::uint32_t> hidden = balanced;
    hidden.insert(hidden.end(), imbalanced.begin(), imbalanced.end());
    std::vector<std::uint32_t> known;
    for (std::uint32_t k = 0; k < prev.size(); ++k) {
        if (!taken[k]) known.push_back(k);
    }

    const PackedRows preal(real, known);
    const PackedRows psyn(syn, known);

    // 1-NN match on known columns; ties -> lowest synthetic row index.
    std::vector<std::size_t> match(real.n_rows(), 0);
    parallel_for_blocks(real.n_rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < psyn.n_rows(); ++j) {
                const std::uint32_t h = preal.hamming(i, psyn, j);
                if (h < best) {
                    best = h;
                    best_j = j;
                    if (best == 0) break;
                }
            }
            match[i] = best_j;
        }
    });

    AirResult result;
    for (std::uint32_t k : balanced) result.balanced_codes.push_back(real.vocab().code(k));
    for (std::uint32_t k : imbalanced) result.imbalanced_codes.push_back(real.vocab().code(k));
    for (std::uint32_t k : hidden) result.hidden_codes.push_back(real.vocab().code(k));
    result.imbalanced_rule = opts.imbalanced_rule == ImbalancedRule::FarthestFromHalf
                                 ? "farthest_from_half"
                                 : "lowest_prevalence";

    std::vector<std::uint64_t> tp_per(hidden.size(), 0), fp_per(hidden.size(), 0), fn_per(hidden.size(), 0);
    for (std::size_t i = 0; i < real.n_rows(); ++i) {
        const std::size_t j = match[i];
        for (std::size_t h = 0; h < hidden.size(); ++h) {
            const bool truth = real.cell(i, hidden[h]);
            const bool pred = syn.cell(j, hidden[h]);
            if (pred && truth) ++tp_per[h];
            else if (pred && !truth) ++fp_per[h];
            else if (!pred && truth) ++fn_per[h];
        }
    }
    for (std::size_t h = 0; h < hidden.size(); ++h) {
        result.tp += tp_per[h];
        result.fp += fp_per[h];
        result.fn += fn_per[h];
        const std::uint64_t denom = 2 * tp_per[h] + fp_per[h] + fn_per[h];
        result.per_code_f1.emplace_back(real.vocab().code(hidden[h]),
                                        denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp_per[h]) /
                                                               static_cast<double>(denom));
    }
    const std::uint64_t denom = 2 * result.tp + result.fp + result.fn;
    result.f1_micro = denom == 0 ? 0.0 : 2.0 * static_cast<double>(result.tp) / static_cast<double>(denom);
    return result;
}

}  // namespace synthbench
