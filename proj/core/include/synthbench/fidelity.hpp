#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

// Maximum over codes of the absolute prevalence difference. (This "MMD" is a
// max of marginal gaps, not the kernel maximum-mean-discrepancy of the ML
// literature.)
double mmd_max(const PhenotypeMatrix& real, const PhenotypeMatrix& syn);

// Relative prevalence errors. Codes with zero real prevalence are excluded
// from the sums (the formulas are undefined there) and reported.
struct RelativePrevalenceError {
    double rmspe_raw = 0.0;  // 100 * sqrt(mean squared relative error)
    double mape = 0.0;       // 100 * mean absolute relative error
    std::vector<std::string> excluded_codes;
};
RelativePrevalenceError relative_prevalence_error(const PhenotypeMatrix& real, const PhenotypeMatrix& syn);

// Frobenius norm of the difference of Pearson correlation matrices.
struct CorrelationFdResult {
    double cfd = 0.0;
    std::vector<std::string> constant_columns_real;
    std::vector<std::string> constant_columns_syn;
};
CorrelationFdResult correlation_fd(const PhenotypeMatrix& real, const PhenotypeMatrix& syn);

// Frobenius norm of the difference of co-occurrence matrices X'X (raw scale).
double cooccurrence_fd(const PhenotypeMatrix& real, const PhenotypeMatrix& syn);

// Train a from-scratch logistic discriminator (real = 1, synthetic = 0) on
// all K features, stratified k-fold CV; mean held-out AUC/ACC across folds.
// Lower values mean the synthetic data is harder to tell apart.
struct DiscriminativeResult {
    double auc = 0.0;
    double acc = 0.0;
};
DiscriminativeResult discriminative_prediction(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                               int k_folds = 5, std::uint64_t seed = 0);

struct FidelityOptions {
    int folds = 5;
    std::uint64_t seed = 0;
    // Discriminator ridge strength is l2_scale * n_train; keeps the
    // high-dimensional fit well conditioned.
    double l2_scale = 1e-4;
    bool with_prevalence_pairs = false;
    bool with_discriminative = true;
};

struct FidelityResult {
    double mmd = 0.0;
    double rmspe_reported = 0.0;  // raw RMSPE / 100 (presentation convention)
    double mape = 0.0;
    double cfd = 0.0;
    double cofd_reported = 0.0;  // raw COFD / 1000
    double disc_auc = 0.0;
    double disc_acc = 0.0;
    std::vector<std::string> excluded_codes;
    std::vector<std::string> constant_columns_real;
    std::vector<std::string> constant_columns_syn;
    // (real, syn) prevalence per code, for plotting.
    std::vector<std::pair<double, double>> per_code_prevalence_pairs;
};

FidelityResult evaluate_fidelity(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                 const FidelityOptions& opts = {});

}  // namespace synthbench
