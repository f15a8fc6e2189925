#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "synthbench/baselines.hpp"
#include "synthbench/error.hpp"
#include "synthbench/kernels.hpp"
#include "synthbench/parallel.hpp"

using namespace synthbench;

TEST_CASE("pbr with degenerate probabilities") {
    GenerationConfig cfg;
    cfg.target_size = 3;
    cfg.seed = 1;
    const PhenotypeMatrix m = generate_pbr({1.0, 0.0}, Vocabulary({"A", "B"}), cfg);
    REQUIRE(m.n_rows() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.row(i) == PhenotypeMatrix::Row{0});
}

TEST_CASE("pbr empirical prevalence concentrates") {
    GenerationConfig cfg;
    cfg.target_size = 100000;
    cfg.seed = 42;
    const PhenotypeMatrix m = generate_pbr({0.3}, Vocabulary({"A"}), cfg);
    const double p = prevalence(m)[0];
    CHECK(std::abs(p - 0.3) < 0.01);  // 99.99% binomial bound ~ 3.9*sqrt(.3*.7/1e5) < 0.006
}

TEST_CASE("pbr columns are independent") {
    GenerationConfig cfg;
    cfg.target_size = 200000;
    cfg.seed = 7;
    const PhenotypeMatrix m = generate_pbr({0.5, 0.5}, Vocabulary({"A", "B"}), cfg);
    const CorrelationMatrix c = pearson_correlation(m);
    CHECK(std::abs(c.corr(0, 1)) < 0.01);
}

TEST_CASE("pbr pairwise correlations stay below 0.02 at M=2e5") {
    GenerationConfig cfg;
    cfg.target_size = 200000;
    cfg.seed = 99;
    const std::vector<double> prev = {0.1, 0.3, 0.5, 0.7, 0.9};
    const PhenotypeMatrix m = generate_pbr(prev, Vocabulary(fixtures::make_codes(prev.size())), cfg);
    const CorrelationMatrix c = pearson_correlation(m);
    for (Eigen::Index a = 0; a < c.corr.rows(); ++a) {
        for (Eigen::Index b = a + 1; b < c.corr.cols(); ++b) {
            CHECK(std::abs(c.corr(a, b)) <= 0.02);
        }
    }
}

TEST_CASE("pbr rejects bad prevalence") {
    GenerationConfig cfg;
    CHECK_THROWS_AS(generate_pbr({1.5}, Vocabulary({"A"}), cfg), ConfigError);
    CHECK_THROWS_AS(generate_pbr({0.5, 0.5}, Vocabulary({"A"}), cfg), ConfigError);
}

TEST_CASE("resample of a single row copies it") {
    const PhenotypeMatrix real = fixtures::from_dense({{1, 0, 1}});
    GenerationConfig cfg;
    cfg.target_size = 4;
    cfg.seed = 5;
    const PhenotypeMatrix syn = generate_resample(real, cfg);
    REQUIRE(syn.n_rows() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(syn.row(i) == real.row(0));
    CHECK(syn.vocab() == real.vocab());
}

TEST_CASE("resample closure: every output row exists in the input") {
    const PhenotypeMatrix real = fixtures::random_matrix(3, 50, 10);
    GenerationConfig cfg;
    cfg.target_size = real.n_rows();
    cfg.seed = 11;
    const PhenotypeMatrix syn = generate_resample(real, cfg);
    for (std::size_t i = 0; i < syn.n_rows(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < real.n_rows() && !found; ++j) found = syn.row(i) == real.row(j);
        CHECK(found);
    }
}

TEST_CASE("resample prevalence concentrates on the source prevalence") {
    // 10 rows at prevalence 0.4 in one column
    std::vector<std::vector<int>> dense(10, std::vector<int>(1, 0));
    for (int i = 0; i < 4; ++i) dense[i][0] = 1;
    const PhenotypeMatrix real = fixtures::from_dense(dense);
    GenerationConfig cfg;
    cfg.target_size = 100000;
    cfg.seed = 3;
    const PhenotypeMatrix syn = generate_resample(real, cfg);
    CHECK(std::abs(prevalence(syn)[0] - 0.4) < 0.01);
}

TEST_CASE("resample of an empty matrix is an error") {
    const PhenotypeMatrix empty(Vocabulary({"A"}), {});
    CHECK_THROWS_AS(generate_resample(empty, GenerationConfig{}), DataError);
}

TEST_CASE("generation is deterministic and worker-count independent") {
    const PhenotypeMatrix real = fixtures::random_matrix(13, 80, 20);
    GenerationConfig cfg;
    cfg.target_size = 500;
    cfg.seed = 12345;

    set_worker_budget(1);
    const PhenotypeMatrix pbr_1 = generate_pbr(real, cfg);
    const PhenotypeMatrix rs_1 = generate_resample(real, cfg);
    set_worker_budget(4);
    const PhenotypeMatrix pbr_4 = generate_pbr(real, cfg);
    const PhenotypeMatrix rs_4 = generate_resample(real, cfg);
    set_worker_budget(0);
    const PhenotypeMatrix pbr_hw = generate_pbr(real, cfg);

    CHECK(pbr_1 == pbr_4);
    CHECK(pbr_1 == pbr_hw);
    CHECK(rs_1 == rs_4);

    GenerationConfig other = cfg;
    other.seed = 54321;
    CHECK_FALSE(generate_pbr(real, other) == pbr_1);
    set_worker_budget(0);
}
