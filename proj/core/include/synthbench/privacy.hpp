#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

struct MirOptions {
    int hist_bins = 50;  // equal-width bins over [0, max distance]
};

// Membership inference risk: distribution of each real record's minimum
// Euclidean distance to the synthetic set. Real rows with no positive code are
// excluded everywhere (distances, mean/median, histogram, exact matches).
// Higher distances indicate lower risk.
struct MirResult {
    double mean = 0.0;
    double median = 0.0;
    std::vector<double> distances;  // per surviving real row, original order
    std::uint64_t excluded_zero_rows = 0;
    double exact_match_fraction = 0.0;
    std::vector<std::uint64_t> histogram;
    double hist_max = 0.0;  // bin width = hist_max / histogram.size()
    std::vector<std::pair<double, double>> cdf;  // (distance, cumulative fraction) at distinct values
};
MirResult mir(const PhenotypeMatrix& real, const PhenotypeMatrix& syn, const MirOptions& opts = {});

enum class ImbalancedRule {
    FarthestFromHalf,  // |prevalence - 0.5| largest, among nonzero-prevalence codes
    LowestPrevalence,  // rarest nonzero codes
};

struct AirOptions {
    int n_balanced = 10;
    int n_imbalanced = 10;
    ImbalancedRule imbalanced_rule = ImbalancedRule::FarthestFromHalf;
};

// Attribute inference risk: hide the selected codes, match each real record to
// its nearest synthetic record on the remaining (known) columns, predict the
// hidden attributes from the match, and pool micro-F1 over all hidden cells.
// Lower F1 indicates lower risk. 1-NN ties break to the lowest synthetic row.
struct AirResult {
    std::vector<std::string> balanced_codes;
    std::vector<std::string> imbalanced_codes;
    std::vector<std::string> hidden_codes;  // balanced then imbalanced
    double f1_micro = 0.0;
    std::uint64_t tp = 0, fp = 0, fn = 0;
    std::vector<std::pair<std::string, double>> per_code_f1;
    std::string imbalanced_rule;
};
AirResult air(const PhenotypeMatrix& real, const PhenotypeMatrix& syn, const AirOptions& opts = {});

}  // namespace synthbench
