#include "synthbench/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthbench/classification_metrics.hpp"
#include "synthbench/error.hpp"
#include "synthbench/kfold.hpp"
#include "synthbench/logistic.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

OutcomeSpec OutcomeSpec::code(std::string c) {
    OutcomeSpec s;
    s.text_ = c;
    s.value_ = std::move(c);
    s.is_prefix_ = false;
    return s;
}

OutcomeSpec OutcomeSpec::prefix(std::string p) {
    OutcomeSpec s;
    s.text_ = p + "*";
    s.value_ = std::move(p);
    s.is_prefix_ = true;
    return s;
}

OutcomeSpec OutcomeSpec::parse(std::string_view text) {
    if (text.empty()) throw ConfigError("empty outcome specification");
    if (text.back() == '*') {
        if (text.size() == 1) throw ConfigError("outcome prefix must be nonempty");
        return prefix(std::string(text.substr(0, text.size() - 1)));
    }
    return code(std::string(text));
}

std::vector<std::uint32_t> OutcomeSpec::resolve(const Vocabulary& vocab) const {
    std::vector<std::uint32_t> cols;
    if (is_prefix_) {
        for (std::uint32_t k = 0; k < vocab.size(); ++k) {
            if (vocab.code(k).rfind(value_, 0) == 0) cols.push_back(k);
        }
    } else if (auto idx = vocab.index_of(value_)) {
        cols.push_back(*idx);
    }
    if (cols.empty()) throw DataError("outcome '" + text_ + "' matches no vocabulary column");
    return cols;
}

namespace {

std::vector<int> outcome_indicator(const PhenotypeMatrix& m, const std::vector<std::uint32_t>& cols) {
    std::vector<int> y(m.n_rows(), 0);
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        for (std::uint32_t c : cols) {
            if (m.cell(i, c)) {
                y[i] = 1;
                break;
            }
        }
    }
    return y;
}

}  // namespace

AnalyticalResult analytical_utility(const PhenotypeMatrix& matrix, const OutcomeSpec& outcome,
                                    const std::string& predictor_code) {
    AnalyticalResult result;
    result.outcome = outcome.text();
    result.predictor = predictor_code;

    const auto predictor_idx = matrix.vocab().index_of(predictor_code);
    if (!predictor_idx) throw DataError("predictor code '" + predictor_code + "' not in vocabulary");
    const std::vector<std::uint32_t> outcome_cols = outcome.resolve(matrix.vocab());
    if (std::find(outcome_cols.begin(), outcome_cols.end(), *predictor_idx) != outcome_cols.end()) {
        throw ConfigError("predictor '" + predictor_code + "' is one of the outcome columns");
    }
    if (matrix.n_rows() == 0) throw DataError("empty matrix");

    const std::vector<int> y = outcome_indicator(matrix, outcome_cols);

    // 2x2 table: cell[x][y]
    std::uint64_t cell[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const int x = matrix.cell(i, *predictor_idx) ? 1 : 0;
        ++cell[x][y[i]];
    }
    const std::uint64_t n1 = cell[1][0] + cell[1][1];
    const std::uint64_t y1 = cell[0][1] + cell[1][1];
    if (y1 == 0 || y1 == matrix.n_rows()) {
        result.failure_reason = "single-class outcome";
        return result;
    }
    if (n1 == 0 || n1 == matrix.n_rows()) {
        result.failure_reason = "degenerate predictor (single-valued)";
        return result;
    }
    if (cell[0][0] == 0 || cell[0][1] == 0 || cell[1][0] == 0 || cell[1][1] == 0) {
        result.failure_reason = "separation/positivity: empty 2x2 cell";
        return result;
    }

    Eigen::MatrixXd x(matrix.n_rows(), 1);
    Eigen::VectorXd yv(matrix.n_rows());
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        x(static_cast<Eigen::Index>(i), 0) = matrix.cell(i, *predictor_idx) ? 1.0 : 0.0;
        yv(static_cast<Eigen::Index>(i)) = y[i];
    }
    LogisticOptions opts;  // unpenalized
    const LogisticModel model = fit_logistic(x, yv, opts);
    if (!model.converged || !model.standard_errors || model.standard_errors->size() != 1) {
        result.failure_reason = model.separation_flag ? "separation/positivity" : "did not converge";
        return result;
    }
    result.converged = true;
    result.beta_hat = model.beta(0);
    const double se = (*model.standard_errors)(0);
    result.ci_low = result.beta_hat - 1.96 * se;
    result.ci_high = result.beta_hat + 1.96 * se;
    return result;
}

std::optional<double> PredictiveResult::delta_auc_tstr() const {
    if (!trtr || !tstr) return std::nullopt;
    return tstr->auc - trtr->auc;
}
std::optional<double> PredictiveResult::delta_acc_tstr() const {
    if (!trtr || !tstr) return std::nullopt;
    return tstr->acc - trtr->acc;
}
std::optional<double> PredictiveResult::delta_auc_tsrtr() const {
    if (!trtr || !tsrtr) return std::nullopt;
    return tsrtr->auc - trtr->auc;
}
std::optional<double> PredictiveResult::delta_acc_tsrtr() const {
    if (!trtr || !tsrtr) return std::nullopt;
    return tsrtr->acc - trtr->acc;
}

namespace {

// Dense predictors with the outcome column removed.
Eigen::MatrixXd predictors_without(const PhenotypeMatrix& m, const std::vector<std::size_t>& rows,
                                   std::uint32_t outcome_col) {
    const Eigen::Index k = static_cast<Eigen::Index>(m.n_cols()) - 1;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::uint32_t c : m.row(rows[i])) {
            if (c == outcome_col) continue;
            const Eigen::Index col = c < outcome_col ? c : static_cast<Eigen::Index>(c) - 1;
            x(static_cast<Eigen::Index>(i), col) = 1.0;
        }
    }
    return x;
}

std::vector<std::size_t> all_rows(const PhenotypeMatrix& m) {
    std::vector<std::size_t> idx(m.n_rows());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

}  // namespace

PredictiveResult predictive_utility(const PhenotypeMatrix& real, const PhenotypeMatrix& syn,
                                    const std::string& outcome_code, const PredictiveOptions& opts) {
    if (!(real.vocab() == syn.vocab())) throw DataError("real and synthetic matrices must share a vocabulary");
    const auto outcome_idx = real.vocab().index_of(outcome_code);
    if (!outcome_idx) throw DataError("outcome code '" + outcome_code + "' not in vocabulary");
    if (real.n_rows() < 10) throw DataError("predictive utility needs at least 10 real rows");
    if (opts.split_denominator < 2) throw ConfigError("split denominator must be >= 2");

    const std::vector<int> y_real = outcome_indicator(real, {*outcome_idx});
    const std::vector<int> y_syn = outcome_indicator(syn, {*outcome_idx});

    // 4:1 split = fold 0 of a seeded 5-fold plan (stratified by default).
    std::vector<std::size_t> train_rows, test_rows;
    if (opts.stratified_split) {
        if (std::count(y_real.begin(), y_real.end(), 1) == 0 ||
            std::count(y_real.begin(), y_real.end(), 0) == 0) {
            PredictiveResult r;
            r.failures["split"] = "single-class outcome in real data";
            return r;
        }
        const FoldPlan plan = stratified_kfold(y_real, opts.split_denominator, opts.seed);
        test_rows = plan.fold_indices(0);
        train_rows = plan.complement_indices(0);
    } else {
        std::vector<std::size_t> order = all_rows(real);
        Rng rng = Rng(opts.seed).stream("split");
        deterministic_shuffle(order, rng);
        const std::size_t n_test = real.n_rows() / static_cast<std::size_t>(opts.split_denominator);
        test_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
        train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
        std::sort(test_rows.begin(), test_rows.end());
        std::sort(train_rows.begin(), train_rows.end());
    }

    PredictiveResult result;
    result.n_train = train_rows.size();
    result.n_test = test_rows.size();

    std::vector<int> y_test;
    y_test.reserve(test_rows.size());
    for (std::size_t i : test_rows) y_test.push_back(y_real[i]);
    if (std::count(y_test.begin(), y_test.end(), 1) == 0 ||
        std::count(y_test.begin(), y_test.end(), 0) == 0) {
        result.failures["test"] = "single-class outcome in the test split";
        return result;
    }
    const Eigen::MatrixXd x_test = predictors_without(real, test_rows, *outcome_idx);

    struct Scenario {
        const char* name;
        Eigen::MatrixXd x;
        Eigen::VectorXd y;
    };
    std::vector<Scenario> scenarios;

    auto stack = [&](const std::vector<std::size_t>& real_part, bool with_syn) {
        const std::size_t n = real_part.size() + (with_syn ? syn.n_rows() : 0);
        Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(real.n_cols()) - 1);
        Eigen::VectorXd y(static_cast<Eigen::Index>(n));
        x.topRows(static_cast<Eigen::Index>(real_part.size())) =
            predictors_without(real, real_part, *outcome_idx);
        for (std::size_t i = 0; i < real_part.size(); ++i) {
            y(static_cast<Eigen::Index>(i)) = y_real[real_part[i]];
        }
        if (with_syn) {
            const std::vector<std::size_t> syn_rows = all_rows(syn);
            x.bottomRows(static_cast<Eigen::Index>(syn.n_rows())) =
                predictors_without(syn, syn_rows, *outcome_idx);
            for (std::size_t i = 0; i < syn.n_rows(); ++i) {
                y(static_cast<Eigen::Index>(real_part.size() + i)) = y_syn[i];
            }
        }
        return std::make_pair(std::move(x), std::move(y));
    };

    {
        auto [x, y] = stack(train_rows, false);
        scenarios.push_back({"trtr", std::move(x), std::move(y)});
    }
    {
        auto [x, y] = stack({}, true);
        scenarios.push_back({"tstr", std::move(x), std::move(y)});
    }
    {
        auto [x, y] = stack(train_rows, true);
        scenarios.push_back({"tsrtr", std::move(x), std::move(y)});
    }

    for (Scenario& sc : scenarios) {
        const double mean = sc.y.size() > 0 ? sc.y.mean() : 0.0;
        if (sc.y.size() == 0 || mean == 0.0 || mean == 1.0) {
            result.failures[sc.name] = "single-class outcome in the training set";
            continue;
        }
        LogisticOptions fit_opts;
        fit_opts.l2 = opts.l2_scale * static_cast<double>(sc.y.size());
        const LogisticModel model = fit_logistic(sc.x, sc.y, fit_opts);
        const Eigen::VectorXd prob = predict_proba(model, x_test);
        std::vector<double> scores(prob.data(), prob.data() + prob.size());
        const ScenarioScore score{auc(scores, y_test), accuracy(scores, y_test)};
        if (std::string(sc.name) == "trtr") result.trtr = score;
        else if (std::string(sc.name) == "tstr") result.tstr = score;
        else result.tsrtr = score;
    }
    return result;
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DataError("spearman inputs differ in length");
    if (a.size() < 2) throw DataError("spearman needs at least two points");

    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> ra = ranks(a);
    const std::vector<double> rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa) / std::sqrt(sbb);
}

SweepResult per_code_tstr_sweep(const PhenotypeMatrix& real, const PhenotypeMatrix& syn, double min_prev,
                                int n_codes, std::uint64_t seed, const PredictiveOptions& opts) {
    if (n_codes < 1) throw ConfigError("sweep needs n_codes >= 1");
    const std::vector<double> prev = prevalence(real);
    std::vector<std::uint32_t> eligible;
    for (std::uint32_t k = 0; k < prev.size(); ++k) {
        if (prev[k] > min_prev) eligible.push_back(k);
    }
    if (eligible.size() < static_cast<std::size_t>(n_codes)) {
        throw DataError("only " + std::to_string(eligible.size()) + " codes have prevalence > " +
                        std::to_string(min_prev) + ", need " + std::to_string(n_codes));
    }

    std::vector<std::uint32_t> chosen = eligible;
    if (chosen.size() > static_cast<std::size_t>(n_codes)) {
        Rng rng = Rng(seed).stream("sweep");
        deterministic_shuffle(chosen, rng);
        chosen.resize(static_cast<std::size_t>(n_codes));
    }
    std::sort(chosen.begin(), chosen.end());  // merge deterministically by code order

    SweepResult out;
    std::vector<double> aucs, prevs;
    for (std::uint32_t col : chosen) {
        PredictiveOptions per_code = opts;
        per_code.seed = Rng(opts.seed).stream(col).at(0);
        const PredictiveResult pr = predictive_utility(real, syn, real.vocab().code(col), per_code);
        if (!pr.tstr) continue;  // per-code failure: excluded from the table
        SweepRow row;
        row.code = real.vocab().code(col);
        row.prevalence = prev[col];
        row.auc_tstr = pr.tstr->auc;
        out.rows.push_back(row);
        aucs.push_back(row.auc_tstr);
        prevs.push_back(row.prevalence);
    }
    out.rho_vs_prevalence = aucs.size() >= 2 ? spearman_rho(aucs, prevs)
                                             : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace synthbench
