#include "synthbench/logistic.hpp"

#include <cmath>
#include <limits>

#include "synthbench/error.hpp"

namespace synthbench {

namespace {

constexpr double kProbEps = 1e-12;

double sigmoid_clipped(double t) {
    double p;
    if (t >= 0) {
        p = 1.0 / (1.0 + std::exp(-t));
    } else {
        const double e = std::exp(t);
        p = e / (1.0 + e);
    }
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

// log(1 + e^t) without overflow
double log1pexp(double t) {
    if (t > 0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

void validate_labels(const Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 0.0 && y(i) != 1.0) throw DataError("labels must be 0/1");
    }
}

}  // namespace

double penalized_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& intercept_and_beta, double l2) {
    const double b0 = intercept_and_beta(0);
    const Eigen::VectorXd beta = intercept_and_beta.tail(intercept_and_beta.size() - 1);
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(X.rows(), b0);
    if (X.cols() > 0) eta += X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        ll += y(i) * eta(i) - log1pexp(eta(i));
    }
    return ll - 0.5 * l2 * beta.squaredNorm();
}

Eigen::VectorXd penalized_loglik_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& intercept_and_beta, double l2) {
    const double b0 = intercept_and_beta(0);
    const Eigen::VectorXd beta = intercept_and_beta.tail(intercept_and_beta.size() - 1);
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(X.rows(), b0);
    if (X.cols() > 0) eta += X * beta;
    Eigen::VectorXd residual(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        residual(i) = y(i) - sigmoid_clipped(eta(i));
    }
    Eigen::VectorXd grad(intercept_and_beta.size());
    grad(0) = residual.sum();
    if (X.cols() > 0) grad.tail(X.cols()) = X.transpose() * residual - l2 * beta;
    return grad;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LogisticOptions& opts) {
    const Eigen::Index n = y.size();
    if (n < 1) throw DataError("cannot fit on an empty dataset");
    if (X.rows() != n) throw DataError("design matrix rows do not match label count");
    if (opts.l2 < 0) throw ConfigError("ridge strength must be nonnegative");
    validate_labels(y);

    const Eigen::Index p = X.cols();
    const double ybar = y.mean();
    const bool single_class = (ybar == 0.0 || ybar == 1.0);

    LogisticModel model;
    if (p == 0) {
        if (single_class) throw DataError("single-class outcome: intercept is not identifiable");
        model.intercept = std::log(ybar / (1.0 - ybar));
        model.beta = Eigen::VectorXd(0);
        model.converged = true;
        model.n_iter = 0;
        // information for the intercept is n * mu * (1 - mu)
        model.intercept_se = 1.0 / std::sqrt(static_cast<double>(n) * ybar * (1.0 - ybar));
        model.standard_errors = Eigen::VectorXd(0);
        return model;
    }
    if (single_class) {
        throw DataError("single-class outcome with non-intercept features (degenerate fit)");
    }

    // theta = [intercept, beta]
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 1);
    theta(0) = std::log(ybar / (1.0 - ybar));
    double ll = penalized_loglik(X, y, theta, opts.l2);

    Eigen::MatrixXd hessian(p + 1, p + 1);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        model.n_iter = iter;
        const Eigen::VectorXd grad = penalized_loglik_gradient(X, y, theta, opts.l2);
        if (grad.lpNorm<Eigen::Infinity>() <= opts.tol) {
            model.converged = true;
            break;
        }

        // Observed information: [1 X]' W [1 X] + l2 * diag(0, 1, ..., 1)
        Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, theta(0));
        eta += X * theta.tail(p);
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = sigmoid_clipped(eta(i));
            w(i) = mu * (1.0 - mu);
        }
        hessian(0, 0) = w.sum();
        const Eigen::VectorXd xtw = X.transpose() * w;
        hessian.block(0, 1, 1, p) = xtw.transpose();
        hessian.block(1, 0, p, 1) = xtw;
        hessian.block(1, 1, p, p) = X.transpose() * w.asDiagonal() * X;
        for (Eigen::Index j = 1; j <= p; ++j) hessian(j, j) += opts.l2;

        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        if (ldlt.info() != Eigen::Success) break;
        Eigen::VectorXd step = ldlt.solve(grad);
        if (!step.allFinite()) break;

        // Step halving against the penalized log-likelihood.
        double scale = 1.0;
        Eigen::VectorXd proposal = theta + step;
        double ll_new = penalized_loglik(X, y, proposal, opts.l2);
        for (int h = 0; h < 30 && !(ll_new > ll - 1e-12); ++h) {
            scale *= 0.5;
            proposal = theta + scale * step;
            ll_new = penalized_loglik(X, y, proposal, opts.l2);
        }
        if (!(ll_new > ll - 1e-12)) break;  // no improving step found
        theta = proposal;
        ll = ll_new;

        if (opts.l2 == 0.0 && theta.lpNorm<Eigen::Infinity>() > opts.separation_bound) {
            model.separation_flag = true;
            break;
        }
    }

    model.intercept = theta(0);
    model.beta = theta.tail(p);

    if (model.converged) {
        // Wald SEs from the inverse observed information at the optimum.
        Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, theta(0));
        eta += X * theta.tail(p);
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = sigmoid_clipped(eta(i));
            w(i) = mu * (1.0 - mu);
        }
        hessian(0, 0) = w.sum();
        const Eigen::VectorXd xtw = X.transpose() * w;
        hessian.block(0, 1, 1, p) = xtw.transpose();
        hessian.block(1, 0, p, 1) = xtw;
        hessian.block(1, 1, p, p) = X.transpose() * w.asDiagonal() * X;
        for (Eigen::Index j = 1; j <= p; ++j) hessian(j, j) += opts.l2;

        Eigen::FullPivLU<Eigen::MatrixXd> lu(hessian);
        if (lu.isInvertible()) {
            const Eigen::MatrixXd cov = lu.inverse();
            bool positive = true;
            for (Eigen::Index j = 0; j <= p; ++j) positive = positive && cov(j, j) > 0;
            if (positive) {
                Eigen::VectorXd se(p);
                for (Eigen::Index j = 0; j < p; ++j) se(j) = std::sqrt(cov(j + 1, j + 1));
                model.standard_errors = std::move(se);
                model.intercept_se = std::sqrt(cov(0, 0));
            }
        }
    }
    return model;
}

Eigen::VectorXd predict_proba(const LogisticModel& model, const Eigen::MatrixXd& X) {
    if (X.cols() != model.beta.size()) {
        throw DataError("feature dimension mismatch: model has " + std::to_string(model.beta.size()) +
                        ", input has " + std::to_string(X.cols()));
    }
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(X.rows(), model.intercept);
    if (X.cols() > 0) eta += X * model.beta;
    Eigen::VectorXd prob(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) prob(i) = sigmoid_clipped(eta(i));
    return prob;
}

}  // namespace synthbench
