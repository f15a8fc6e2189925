#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

// Binary outcome defined by a single code or by a code prefix ("CA*" matches
// every code starting with CA; the indicator ORs the matched columns).
class OutcomeSpec {
public:
    static OutcomeSpec code(std::string c);
    static OutcomeSpec prefix(std::string p);
    // "CA*" -> prefix, anything else -> exact code.
    static OutcomeSpec parse(std::string_view text);

    // Matched column indices, ascending; throws DataError when none match.
    std::vector<std::uint32_t> resolve(const Vocabulary& vocab) const;
    const std::string& text() const { return text_; }
    bool is_prefix() const { return is_prefix_; }

private:
    std::string text_;
    std::string value_;
    bool is_prefix_ = false;
};

// Bivariate logistic regression: outcome indicator on one predictor column,
// unpenalized, Wald 95% CI. Positivity/separation failures are reported via
// failure_reason instead of estimates.
struct AnalyticalResult {
    std::string outcome;
    std::string predictor;
    double beta_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool converged = false;
    std::string failure_reason;  // empty on success
};
AnalyticalResult analytical_utility(const PhenotypeMatrix& matrix, const OutcomeSpec& outcome,
                                    const std::string& predictor_code);

struct PredictiveOptions {
    std::uint64_t seed = 0;
    bool stratified_split = true;  // 4:1 split stratified by outcome
    double l2_scale = 1e-4;        // ridge = l2_scale * n_train per fit
    int split_denominator = 5;     // test = 1/denominator of real rows
};

struct ScenarioScore {
    double auc = 0.0;
    double acc = 0.0;
};

// TRTR: fit on the real training split. TSTR: fit on all synthetic rows.
// TSRTR: fit on real training split plus all synthetic rows. All three are
// evaluated on the same held-out real test split; the outcome column is
// removed from the predictors in every fit.
struct PredictiveResult {
    std::optional<ScenarioScore> trtr;
    std::optional<ScenarioScore> tstr;
    std::optional<ScenarioScore> tsrtr;
    std::map<std::string, std::string> failures;  // scenario -> reason
    std::size_t n_train = 0;
    std::size_t n_test = 0;

    // Deltas are always recomputed from the stored absolutes.
    std::optional<double> delta_auc_tstr() const;
    std::optional<double> delta_acc_tstr() const;
    std::optional<double> delta_auc_tsrtr() const;
    std::optional<double> delta_acc_tsrtr() const;
};
PredictiveResult predictive_utility(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                    const std::string& outcome_code, const PredictiveOptions& opts = {});

// Spearman rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

// Repeat the TSTR evaluation over randomly selected codes with prevalence
// above min_prev; reports the rank correlation between TSTR AUC and
// prevalence.
struct SweepRow {
    std::string code;
    double prevalence = 0.0;
    double auc_tstr = 0.0;
};
struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by vocabulary column
    double rho_vs_prevalence = 0.0;
};
SweepResult per_code_tstr_sweep(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                double min_prev = 0.1, int n_codes = 20, std::uint64_t seed = 0,
                                const PredictiveOptions& opts = {});

}  // namespace synthbench
