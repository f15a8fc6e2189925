#pragma once

#include <Eigen/Dense>
#include <optional>

namespace synthbench {

struct LogisticOptions {
    double l2 = 0.0;      // ridge strength; the intercept is never penalized
    double tol = 1e-8;    // convergence: gradient infinity-norm
    int max_iter = 100;
    // Unpenalized fits whose coefficient norm exceeds this while the
    // likelihood keeps improving are flagged as separated. At |eta| = 30 the
    // fitted probabilities are within 1e-13 of 0/1.
    double separation_bound = 30.0;
};

struct LogisticModel {
    Eigen::VectorXd beta;  // p coefficients
    double intercept = 0.0;
    bool converged = false;
    bool separation_flag = false;
    int n_iter = 0;
    // Wald standard errors from the inverse observed information; present only
    // when converged and the information matrix was invertible.
    std::optional<Eigen::VectorXd> standard_errors;
    std::optional<double> intercept_se;
};

// Maximize the L2-penalized binomial log-likelihood by Newton-Raphson with
// step halving. X is n x p (no intercept column; one is added internally),
// y has entries in {0,1}. Throws DataError when y is single-class and X has
// features; an intercept-only fit (p = 0) uses the closed form logit(mean).
LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const LogisticOptions& opts = {});

// Inverse-logit of the linear predictor; outputs clipped to (0,1).
Eigen::VectorXd predict_proba(const LogisticModel& model, const Eigen::MatrixXd& X);

// Penalized log-likelihood and its analytic gradient at an arbitrary point,
// parameterized as [intercept, beta...]. Exposed for finite-difference checks.
double penalized_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& intercept_and_beta, double l2);
Eigen::VectorXd penalized_loglik_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& intercept_and_beta, double l2);

}  // namespace synthbench
