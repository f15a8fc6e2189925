#include "synthbench/fidelity.hpp"

#include <cmath>

#include "synthbench/classification_metrics.hpp"
#include "synthbench/error.hpp"
#include "synthbench/kernels.hpp"
#include "synthbench/kfold.hpp"
#include "synthbench/logistic.hpp"

namespace synthbench {

namespace {

void require_shared_vocab(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    if (!(real.vocab() == syn.vocab())) {
        throw DataError("real and synthetic matrices must share a vocabulary (align them first)");
    }
}

void require_nonempty(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    if (real.n_rows() == 0 || syn.n_rows() == 0) throw DataError("both matrices must have at least one row");
}

}  // namespace

double mmd_max(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    require_shared_vocab(real, syn);
    require_nonempty(real, syn);
    const std::vector<double> pr = prevalence(real);
    const std::vector<double> ps = prevalence(syn);
    double worst = 0.0;
    for (std::size_t k = 0; k < pr.size(); ++k) {
        worst = std::max(worst, std::abs(ps[k] - pr[k]));
    }
    return worst;
}

RelativePrevalenceError relative_prevalence_error(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    require_shared_vocab(real, syn);
    require_nonempty(real, syn);
    const std::vector<double> pr = prevalence(real);
    const std::vector<double> ps = prevalence(syn);

    RelativePrevalenceError out;
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < pr.size(); ++k) {
        if (pr[k] == 0.0) {
            out.excluded_codes.push_back(real.vocab().code(static_cast<std::uint32_t>(k)));
            continue;
        }
        const double rel = (ps[k] - pr[k]) / pr[k];
        sum_sq += rel * rel;
        sum_abs += std::abs(rel);
        ++kept;
    }
    if (kept == 0) throw DataError("all codes have zero real prevalence; RMSPE/MAPE undefined");
    out.rmspe_raw = 100.0 * std::sqrt(sum_sq / static_cast<double>(kept));
    out.mape = 100.0 / static_cast<double>(kept) * sum_abs;
    return out;
}

CorrelationFdResult correlation_fd(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    require_shared_vocab(real, syn);
    if (real.n_cols() == 0) throw DataError("CFD undefined for K=0");
    require_nonempty(real, syn);
    const CorrelationMatrix cr = pearson_correlation(real);
    const CorrelationMatrix cs = pearson_correlation(syn);

    CorrelationFdResult out;
    out.cfd = (cr.corr - cs.corr).norm();
    for (std::uint32_t c : cr.constant_columns) out.constant_columns_real.push_back(real.vocab().code(c));
    for (std::uint32_t c : cs.constant_columns) out.constant_columns_syn.push_back(syn.vocab().code(c));
    return out;
}

double cooccurrence_fd(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    require_shared_vocab(real, syn);
    if (real.n_cols() == 0) throw DataError("COFD undefined for K=0");
    return (cooccurrence_counts(real) - cooccurrence_counts(syn)).norm();
}

DiscriminativeResult discriminative_prediction(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                               int k_folds, std::uint64_t seed) {
    require_shared_vocab(real, syn);
    require_nonempty(real, syn);
    const std::size_t n = real.n_rows();
    const std::size_t m = syn.n_rows();
    const Eigen::Index k = static_cast<Eigen::Index>(real.n_cols());

    // Pooled design: real rows labeled 1, synthetic rows labeled 0.
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + m), k);
    std::vector<int> labels(n + m, 0);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = 1;
        for (std::uint32_t c : real.row(i)) pooled(static_cast<Eigen::Index>(i), c) = 1.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::uint32_t c : syn.row(i)) pooled(static_cast<Eigen::Index>(n + i), c) = 1.0;
    }

    const FoldPlan plan = stratified_kfold(labels, k_folds, seed);
    double auc_sum = 0.0;
    double acc_sum = 0.0;
    for (int fold = 0; fold < k_folds; ++fold) {
        const std::vector<std::size_t> train = plan.complement_indices(fold);
        const std::vector<std::size_t> test = plan.fold_indices(fold);

        Eigen::MatrixXd x_train(static_cast<Eigen::Index>(train.size()), k);
        Eigen::VectorXd y_train(static_cast<Eigen::Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            x_train.row(static_cast<Eigen::Index>(i)) = pooled.row(static_cast<Eigen::Index>(train[i]));
            y_train(static_cast<Eigen::Index>(i)) = labels[train[i]];
        }
        LogisticOptions opts;
        opts.l2 = 1e-4 * static_cast<double>(train.size());
        const LogisticModel model = fit_logistic(x_train, y_train, opts);

        Eigen::MatrixXd x_test(static_cast<Eigen::Index>(test.size()), k);
        std::vector<int> y_test(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            x_test.row(static_cast<Eigen::Index>(i)) = pooled.row(static_cast<Eigen::Index>(test[i]));
            y_test[i] = labels[test[i]];
        }
        const Eigen::VectorXd prob = predict_proba(model, x_test);
        std::vector<double> scores(prob.data(), prob.data() + prob.size());
        auc_sum += auc(scores, y_test);
        acc_sum += accuracy(scores, y_test);
    }
    return {auc_sum / k_folds, acc_sum / k_folds};
}

FidelityResult evaluate_fidelity(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                 const FidelityOptions& opts) {
    FidelityResult out;
    out.mmd = mmd_max(real, syn);
    const RelativePrevalenceError rel = relative_prevalence_error(real, syn);
    out.rmspe_reported = rel.rmspe_raw / 100.0;
    out.mape = rel.mape;
    out.excluded_codes = rel.excluded_codes;
    const CorrelationFdResult cfd = correlation_fd(real, syn);
    out.cfd = cfd.cfd;
    out.constant_columns_real = cfd.constant_columns_real;
    out.constant_columns_syn = cfd.constant_columns_syn;
    out.cofd_reported = cooccurrence_fd(real, syn) / 1000.0;
    if (opts.with_discriminative) {
        const DiscriminativeResult disc = discriminative_prediction(real, syn, opts.folds, opts.seed);
        out.disc_auc = disc.auc;
        out.disc_acc = disc.acc;
    }
    if (opts.with_prevalence_pairs) {
        const std::vector<double> pr = prevalence(real);
        const std::vector<double> ps = prevalence(syn);
        out.per_code_prevalence_pairs.reserve(pr.size());
        for (std::size_t k = 0; k < pr.size(); ++k) out.per_code_prevalence_pairs.emplace_back(pr[k], ps[k]);
    }
    return out;
}

}  // namespace synthbench
