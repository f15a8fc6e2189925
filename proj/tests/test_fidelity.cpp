#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "synthbench/baselines.hpp"
#include "synthbench/error.hpp"
#include "synthbench/fidelity.hpp"
#include "synthbench/kernels.hpp"
#include "synthbench/rng.hpp"

using namespace synthbench;
using fixtures::from_dense;

TEST_CASE("mmd_max") {
    const PhenotypeMatrix a = from_dense({{1, 0}, {1, 1}});
    CHECK(mmd_max(a, a) == 0.0);

    // real prev [1.0, 0.5], syn prev [0.5, 0.0]
    const PhenotypeMatrix syn = from_dense({{1, 0}, {0, 0}});
    CHECK(mmd_max(a, syn) == doctest::Approx(0.5));

    const PhenotypeMatrix other(Vocabulary({"X", "Y"}), {{0}});
    CHECK_THROWS_AS(mmd_max(a, other), DataError);
}

TEST_CASE("mmd shrinks as the resample size grows") {
    const PhenotypeMatrix real = fixtures::random_matrix(77, 500, 30);
    double prev_value = 1.0;
    for (std::uint64_t m : {1000ull, 10000ull, 100000ull}) {
        GenerationConfig cfg;
        cfg.target_size = m;
        cfg.seed = 5;
        const double v = mmd_max(real, generate_resample(real, cfg));
        CHECK(v < prev_value);
        prev_value = v;
    }
}

TEST_CASE("rmspe and mape") {
    const PhenotypeMatrix real = from_dense({{1, 1}, {1, 0}});                        // prev [1.0, 0.5]
    const PhenotypeMatrix syn = from_dense({{1, 1}, {1, 0}, {0, 0}, {0, 0}});         // prev [0.5, 0.25]
    const RelativePrevalenceError r = relative_prevalence_error(real, syn);
    CHECK(r.rmspe_raw == doctest::Approx(50.0));  // reported value = 0.5
    CHECK(r.mape == doctest::Approx(50.0));
    CHECK(r.excluded_codes.empty());

    const RelativePrevalenceError zero = relative_prevalence_error(real, real);
    CHECK(zero.rmspe_raw == 0.0);
    CHECK(zero.mape == 0.0);
}

TEST_CASE("rmspe excludes zero-real-prevalence codes") {
    const PhenotypeMatrix real = from_dense({{1, 0}, {1, 0}});  // code 2 never occurs
    const PhenotypeMatrix syn = from_dense({{1, 1}, {1, 0}});
    const RelativePrevalenceError r = relative_prevalence_error(real, syn);
    REQUIRE(r.excluded_codes.size() == 1);
    CHECK(r.excluded_codes[0] == real.vocab().code(1));
    CHECK(r.rmspe_raw == 0.0);  // surviving code matches exactly

    const PhenotypeMatrix all_zero = from_dense({{0, 0}, {0, 0}});
    CHECK_THROWS_AS(relative_prevalence_error(all_zero, syn), DataError);
}

TEST_CASE("correlation Frobenius distance on the hand example") {
    const PhenotypeMatrix real = from_dense({{1, 0}, {0, 1}, {1, 1}});
    const PhenotypeMatrix syn = from_dense({{1, 1}, {0, 0}, {1, 0}});
    // off-diagonal correlations are -0.5 (real) and +0.5 (syn)
    const CorrelationFdResult r = correlation_fd(real, syn);
    CHECK(r.cfd == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(correlation_fd(real, real).cfd == 0.0);
}

TEST_CASE("cfd of pbr output approximates the real off-diagonal magnitude") {
    const PhenotypeMatrix real = fixtures::correlated_pair_matrix(404, 5000, 2);
    GenerationConfig cfg;
    cfg.target_size = 200000;
    cfg.seed = 17;
    const PhenotypeMatrix syn = generate_pbr(real, cfg);
    const double real_offdiag = std::abs(oracle::corr_matrix(oracle::to_dense(real))[0][1]);
    // CFD = sqrt(2 * (r_real - r_pbr)^2) with r_pbr ~ 0
    CHECK(correlation_fd(real, syn).cfd ==
          doctest::Approx(std::sqrt(2.0) * real_offdiag).epsilon(0.05));
}

TEST_CASE("constant columns are zeroed and reported") {
    const PhenotypeMatrix real = from_dense({{1, 1, 0}, {0, 1, 1}});  // col 1 constant
    const PhenotypeMatrix syn = from_dense({{1, 0, 0}, {0, 1, 1}});
    const CorrelationFdResult r = correlation_fd(real, syn);
    REQUIRE(r.constant_columns_real.size() == 1);
    CHECK(r.constant_columns_real[0] == real.vocab().code(1));
    CHECK(r.constant_columns_syn.empty());
}

TEST_CASE("cfd with columns constant in both matrices equals cfd with them dropped") {
    // column 2 is all-zero in both; dropping it must not change the value
    const PhenotypeMatrix real3 = from_dense({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
    const PhenotypeMatrix syn3 = from_dense({{1, 1, 0}, {0, 0, 0}, {1, 0, 0}});
    const PhenotypeMatrix real2 = from_dense({{1, 0}, {0, 1}, {1, 1}});
    const PhenotypeMatrix syn2 = from_dense({{1, 1}, {0, 0}, {1, 0}});
    CHECK(correlation_fd(real3, syn3).cfd == doctest::Approx(correlation_fd(real2, syn2).cfd).epsilon(1e-12));
}

TEST_CASE("co-occurrence Frobenius distance") {
    const PhenotypeMatrix real = from_dense({{1, 0}, {0, 1}, {1, 1}});  // B = [[2,1],[1,2]]
    const PhenotypeMatrix syn = from_dense({{1, 1}, {0, 0}, {1, 0}});   // B = [[2,1],[1,1]]
    CHECK(cooccurrence_fd(real, syn) == doctest::Approx(1.0));  // reported value = 0.001
    CHECK(cooccurrence_fd(real, real) == 0.0);
}

TEST_CASE("stacking a matrix on itself doubles its co-occurrence counts") {
    const PhenotypeMatrix syn = fixtures::random_matrix(8, 30, 6);
    std::vector<PhenotypeMatrix::Row> doubled = syn.rows();
    for (const auto& r : syn.rows()) doubled.push_back(r);
    const PhenotypeMatrix stacked(syn.vocab(), doubled);
    const Eigen::MatrixXd b1 = cooccurrence_counts(syn);
    const Eigen::MatrixXd b2 = cooccurrence_counts(stacked);
    CHECK((b2 - 2.0 * b1).norm() == 0.0);
}

TEST_CASE("discriminative prediction never calls an exact copy distinguishable") {
    // An exact copy shares every row between the pools, and held-out rows have
    // their twins in training, which biases pooled-CV AUC below chance; the
    // bias grows with the feature-to-sample ratio. The copy must never read as
    // distinguishable-above-chance.
    const PhenotypeMatrix real = fixtures::random_matrix(21, 1500, 20);
    const DiscriminativeResult r = discriminative_prediction(real, real, 5, 3);
    CHECK(r.auc <= 0.55);
}

TEST_CASE("discriminative prediction separates a complement matrix") {
    // skewed real (prevalence ~0.15) vs its complement: linearly separable
    const PhenotypeMatrix real = fixtures::random_matrix(22, 400, 15, 0.05, 0.25);
    std::vector<std::vector<int>> comp = oracle::to_dense(real);
    for (auto& row : comp) {
        for (int& v : row) v = 1 - v;
    }
    const PhenotypeMatrix syn = fixtures::from_dense(comp, real.vocab().codes());
    const DiscriminativeResult r = discriminative_prediction(real, syn, 5, 3);
    CHECK(r.auc >= 0.95);
}

TEST_CASE("discriminative prediction near chance when both sides are the same pbr process") {
    const PhenotypeMatrix base = fixtures::random_matrix(23, 200, 12, 0.7, 0.95);
    GenerationConfig a, b;
    a.target_size = 1000;
    a.seed = 100;
    b.target_size = 1000;
    b.seed = 200;
    const PhenotypeMatrix real = generate_pbr(base, a);
    const PhenotypeMatrix syn = generate_pbr(base, b);
    const DiscriminativeResult r = discriminative_prediction(real, syn, 5, 9);
    CHECK(std::abs(r.auc - 0.5) <= 0.06);
}

TEST_CASE("metric symmetry and asymmetry under real/syn swap") {
    const PhenotypeMatrix a = fixtures::random_matrix(31, 60, 10);
    const PhenotypeMatrix b = fixtures::random_matrix(32, 80, 10);
    CHECK(mmd_max(a, b) == doctest::Approx(mmd_max(b, a)).epsilon(1e-15));
    CHECK(correlation_fd(a, b).cfd == doctest::Approx(correlation_fd(b, a).cfd).epsilon(1e-12));
    CHECK(cooccurrence_fd(a, b) == doctest::Approx(cooccurrence_fd(b, a)).epsilon(1e-12));

    // RMSPE's denominator is the real side: construct prevalences 0.5 vs 0.25
    const PhenotypeMatrix real = from_dense({{1}, {1}, {0}, {0}});
    const PhenotypeMatrix syn = from_dense({{1}, {0}, {0}, {0}});
    CHECK(relative_prevalence_error(real, syn).rmspe_raw !=
          doctest::Approx(relative_prevalence_error(syn, real).rmspe_raw));
}

TEST_CASE("duplicating every real row changes COFD but nothing prevalence-based") {
    const PhenotypeMatrix real = fixtures::random_matrix(41, 50, 8);
    const PhenotypeMatrix syn = fixtures::random_matrix(42, 70, 8);
    std::vector<PhenotypeMatrix::Row> doubled = real.rows();
    for (const auto& r : real.rows()) doubled.push_back(r);
    const PhenotypeMatrix real2(real.vocab(), doubled);

    CHECK(mmd_max(real2, syn) == doctest::Approx(mmd_max(real, syn)).epsilon(1e-15));
    CHECK(relative_prevalence_error(real2, syn).rmspe_raw ==
          doctest::Approx(relative_prevalence_error(real, syn).rmspe_raw).epsilon(1e-12));
    CHECK(relative_prevalence_error(real2, syn).mape ==
          doctest::Approx(relative_prevalence_error(real, syn).mape).epsilon(1e-12));
    CHECK(correlation_fd(real2, syn).cfd == doctest::Approx(correlation_fd(real, syn).cfd).epsilon(1e-9));
    CHECK(cooccurrence_fd(real2, syn) != doctest::Approx(cooccurrence_fd(real, syn)));
}

TEST_CASE("metrics are invariant to row permutations") {
    Rng rng(55);
    const PhenotypeMatrix real = fixtures::random_matrix(51, 40, 9);
    const PhenotypeMatrix syn = fixtures::random_matrix(52, 45, 9);
    std::vector<PhenotypeMatrix::Row> shuffled = syn.rows();
    deterministic_shuffle(shuffled, rng);
    const PhenotypeMatrix syn_perm(syn.vocab(), shuffled);

    CHECK(mmd_max(real, syn_perm) == doctest::Approx(mmd_max(real, syn)).epsilon(1e-15));
    CHECK(correlation_fd(real, syn_perm).cfd ==
          doctest::Approx(correlation_fd(real, syn).cfd).epsilon(1e-12));
    CHECK(cooccurrence_fd(real, syn_perm) == doctest::Approx(cooccurrence_fd(real, syn)).epsilon(1e-12));
}

TEST_CASE("evaluate_fidelity applies the reporting conventions") {
    const PhenotypeMatrix real = from_dense({{1, 1}, {1, 0}});
    const PhenotypeMatrix syn = from_dense({{1, 1}, {1, 0}, {0, 0}, {0, 0}});
    FidelityOptions opts;
    opts.with_discriminative = false;  // 4 rows are too few for 5-fold CV
    opts.with_prevalence_pairs = true;
    const FidelityResult r = evaluate_fidelity(real, syn, opts);
    CHECK(r.rmspe_reported == doctest::Approx(0.5));  // raw 50 / 100
    CHECK(r.mape == doctest::Approx(50.0));
    CHECK(r.cofd_reported == doctest::Approx(cooccurrence_fd(real, syn) / 1000.0));
    REQUIRE(r.per_code_prevalence_pairs.size() == 2);
    CHECK(r.per_code_prevalence_pairs[0].first == doctest::Approx(1.0));
    CHECK(r.per_code_prevalence_pairs[1].second == doctest::Approx(0.25));
}
