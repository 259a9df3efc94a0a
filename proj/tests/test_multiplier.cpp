#include "cpd/engine.hpp"
#include "cpd/multiplier.hpp"
#include "cpd/oracle.hpp"
#include "cpd/rng.hpp"
#include "cpd/sphere.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

#include <cmath>

using namespace cpd;

TEST_CASE("zero multipliers give zero check replicates", "[multiplier]") {
    const Sample s = test::random_sample(12, 2, 1);
    const OrthantTable orth = build_orthant_table(s);
    const ProjectionTable proj = build_projection_table(s, discretize(2, 4));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(12);
    for (Combiner c : {Combiner::Max, Combiner::Mean}) {
        REQUIRE(replicate_check(orth, zero, {Family::S, c}) == 0.0);
        REQUIRE(replicate_check(orth, zero, {Family::T, c}) == 0.0);
        REQUIRE(replicate_check(proj, zero, {Family::U, c}) == 0.0);
        REQUIRE(replicate_check(proj, zero, {Family::V, c}) == 0.0);
    }
}

TEST_CASE("constant multipliers give exactly zero hat replicates", "[multiplier]") {
    const Sample s = test::random_sample(15, 3, 2);
    const OrthantTable orth = build_orthant_table(s);
    const ProjectionTable proj = build_projection_table(s, discretize(3, 6));
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(15, 0.1);
    for (Combiner comb : {Combiner::Max, Combiner::Mean}) {
        REQUIRE(replicate_hat(orth, c, {Family::S, comb}) == 0.0);
        REQUIRE(replicate_hat(orth, c, {Family::T, comb}) == 0.0);
        REQUIRE(replicate_hat(proj, c, {Family::U, comb}) == 0.0);
        REQUIRE(replicate_hat(proj, c, {Family::V, comb}) == 0.0);
    }
}

TEST_CASE("two-point check replicate vanishes for xi = (1,-1)", "[multiplier]") {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, 1.0;
    const OrthantTable t = build_orthant_table(Sample{x});
    Eigen::VectorXd xi(2);
    xi << 1.0, -1.0;
    REQUIRE(replicate_check(t, xi, {Family::T, Combiner::Max}) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("fast replicate kernels match the naive three-loop forms", "[multiplier][oracle]") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Eigen::Index n = 8 + static_cast<Eigen::Index>(seed * 3 % 22);
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(seed % 3);
        const Eigen::Index m = seed % 2 == 0 ? 1 : 8;
        const Sample s = test::random_sample(n, d, 300 + seed);
        const Eigen::VectorXd xi = test::random_multipliers(n, 700 + seed);
        const DirectionSet dirs = discretize(d, m);
        const OrthantTable orth = build_orthant_table(s);
        const ProjectionTable proj = build_projection_table(s, dirs);

        for (Combiner c : {Combiner::Max, Combiner::Mean}) {
            for (Method method : {Method::Check, Method::Hat}) {
                const auto fast_orth = method == Method::Check
                                           ? replicate_check(orth, xi, {Family::S, c})
                                           : replicate_hat(orth, xi, {Family::S, c});
                REQUIRE(fast_orth ==
                        Catch::Approx(oracle::replicate(s, xi, {Family::S, c}, method)).margin(1e-12));

                const auto fast_t = method == Method::Check
                                        ? replicate_check(orth, xi, {Family::T, c})
                                        : replicate_hat(orth, xi, {Family::T, c});
                REQUIRE(fast_t ==
                        Catch::Approx(oracle::replicate(s, xi, {Family::T, c}, method)).margin(1e-12));

                const auto fast_u = method == Method::Check
                                        ? replicate_check(proj, xi, {Family::U, c})
                                        : replicate_hat(proj, xi, {Family::U, c});
                REQUIRE(fast_u == Catch::Approx(oracle::replicate(s, xi, {Family::U, c}, method,
                                                                  &dirs))
                                      .margin(1e-12));

                const auto fast_v = method == Method::Check
                                        ? replicate_check(proj, xi, {Family::V, c})
                                        : replicate_hat(proj, xi, {Family::V, c});
                REQUIRE(fast_v == Catch::Approx(oracle::replicate(s, xi, {Family::V, c}, method,
                                                                  &dirs))
                                      .margin(1e-12));
            }
        }
    }
}

TEST_CASE("replicates and p-values follow the counting definition", "[multiplier]") {
    ReplicateSet reps;
    reps.values.resize(3);

    reps.values << 1.0, 2.0, 3.0;
    REQUIRE(pvalue(5.0, reps) == 0.0);

    reps.values << 6.0, 7.0, 4.0;
    REQUIRE(pvalue(5.0, reps) == Catch::Approx(2.0 / 3.0).margin(1e-15));

    reps.values << 5.0, 5.0, 5.0;
    REQUIRE(pvalue(5.0, reps) == 1.0);  // weak inequality
}

TEST_CASE("check process values are centered over many multiplier draws", "[multiplier][property]") {
    const Sample s = test::random_sample(10, 1, 77);
    const Eigen::Index k = 4, q = 7;
    const int draws = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int j = 0; j < draws; ++j) {
        const Eigen::VectorXd xi = test::random_multipliers(10, 4000 + j);
        const double v = oracle::check_process_value(s, xi, k, q);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((sum_sq / draws - mean * mean) / draws);
    REQUIRE(std::abs(mean) <= 4.0 * sd);
}

TEST_CASE("runs are reproducible and worker-count independent", "[multiplier]") {
    const Sample s = test::random_sample(40, 2, 5);
    const DirectionSet dirs = discretize(2, 8);
    const TestReport serial =
        run_test(s, {Family::U, Combiner::Max}, Method::Check, 64, 31, &dirs, 1);
    const TestReport threaded =
        run_test(s, {Family::U, Combiner::Max}, Method::Check, 64, 31, &dirs, 4);
    REQUIRE((serial.replicates == threaded.replicates).all());
    REQUIRE(serial.p_value == threaded.p_value);
    REQUIRE(serial.observed == threaded.observed);

    const TestReport again =
        run_test(s, {Family::U, Combiner::Max}, Method::Check, 64, 31, &dirs, 3);
    REQUIRE((serial.replicates == again.replicates).all());
}

TEST_CASE("constant samples produce observed 0 and p-value 1", "[multiplier]") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(20, 1, 2.5);
    for (Method method : {Method::Hat, Method::Check, Method::Sim}) {
        const TestReport report =
            run_test(Sample{c}, {Family::S, Combiner::Max}, method, 40, 9);
        REQUIRE(report.observed == 0.0);
        REQUIRE(report.p_value == 1.0);
    }
}

TEST_CASE("sim method rejects multivariate data and half-space families", "[multiplier]") {
    const Sample s2 = test::random_sample(10, 2, 3);
    try {
        run_sim_test(s2, {Family::S, Combiner::Max}, 10, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.code == ErrorCode::SimRequiresUnivariate);
    }
    const Sample s1 = test::random_sample(10, 1, 3);
    REQUIRE_THROWS_AS(run_sim_test(s1, {Family::U, Combiner::Max}, 10, 1), Error);
    REQUIRE_NOTHROW(run_sim_test(s1, {Family::T, Combiner::Mean}, 10, 1));
}

TEST_CASE("invalid replicate counts and lengths are rejected", "[multiplier]") {
    const Sample s = test::random_sample(10, 1, 3);
    try {
        run_test(s, {Family::S, Combiner::Max}, Method::Check, 0, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.code == ErrorCode::InvalidN);
    }
    const OrthantTable t = build_orthant_table(s);
    try {
        replicate_check(t, Eigen::VectorXd::Zero(9), {Family::S, Combiner::Max});
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.code == ErrorCode::LengthMismatch);
    }
}

TEST_CASE("shared multipliers reuse the same draws across statistics", "[multiplier]") {
    const Sample s = test::random_sample(25, 1, 15);
    const std::vector<std::pair<StatFamily, Method>> stats = {
        {{Family::S, Combiner::Max}, Method::Check},
        {{Family::T, Combiner::Mean}, Method::Check},
    };
    const auto shared = run_tests(s, stats, 32, 77, nullptr, true);
    REQUIRE(shared[0].seed == shared[1].seed);
    const auto solo = run_test(s, {Family::S, Combiner::Max}, Method::Check, 32, 77);
    REQUIRE((shared[0].replicates == solo.replicates).all());

    const auto split = run_tests(s, stats, 32, 77, nullptr, false);
    REQUIRE(split[0].seed != split[1].seed);
}
