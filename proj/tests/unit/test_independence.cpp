#include <doctest.h>

#include "../oracles.hpp"
#include "ue/independence.hpp"
#include "ue/resampling.hpp"
#include "ue/simulate.hpp"

using namespace ue;

namespace {

CoincidenceMatrix make(std::size_t n, std::vector<double> v)
{
    return CoincidenceMatrix(n, std::move(v), CoincidenceKind::delayed(0.01), Window(0.0, 0.1));
}

// A matrix whose Z equals `target`: scan a shift added to the diagonal of a
// fixed random matrix for a sign change of Z - target, then bisect.
CoincidenceMatrix with_z(double target)
{
    const std::size_t n = 30;
    Rng rng(77);
    std::vector<double> base(n * n);
    for (auto& v : base) v = rng.uniform() * 4.0 + 1.0;
    auto build = [&](double t) {
        auto v = base;
        for (std::size_t i = 0; i < n; ++i) v[i * n + i] = std::max(0.0, v[i * n + i] + t);
        return make(n, v);
    };
    auto f = [&](double t) { return z_stat(build(t)).value_or(0.0) - target; };
    double lo = -1.0, hi = lo;
    for (double t = -1.0; t < 50.0; t += 0.01) {
        if (f(t) * f(t + 0.01) <= 0.0) {
            lo = t;
            hi = t + 0.01;
            break;
        }
    }
    REQUIRE(hi > lo);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    return build(0.5 * (lo + hi));
}

} // namespace

TEST_CASE("method names round-trip")
{
    for (auto m : {TestMethod::Naive, TestMethod::TSC, TestMethod::TSU, TestMethod::FBU, TestMethod::Permutation})
        CHECK(parse_test_method(to_string(m)) == m);
    CHECK(parse_test_method("permutation") == TestMethod::Permutation);
    CHECK(parse_test_method("tsc") == TestMethod::TSC);
    CHECK_THROWS_AS(parse_test_method("bogus"), std::invalid_argument);
}

TEST_CASE("normal cdf agrees with the erfc reference and the 5% quantile")
{
    for (double z = -8; z <= 8; z += 0.25) CHECK(std::abs(normal_cdf(z) - oracle::normal_cdf_ref(z)) < 1e-7);
    CHECK(std::abs(1 - normal_cdf(1.6449) - 0.05) < 1e-4);
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("naive test: Z = 0, Z = 1.6449 and the degenerate matrix")
{
    const auto zero = with_z(0.0);
    REQUIRE(std::abs(*z_stat(zero)) < 1e-9);
    auto r = naive_test(zero);
    CHECK(r.p_upper == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_FALSE(r.degenerate);

    const auto m = with_z(1.6449);
    REQUIRE(std::abs(*z_stat(m) - 1.6449) < 1e-9);
    r = naive_test(m);
    CHECK(std::abs(r.p_upper - 0.05) < 1e-4);
    REQUIRE(r.p_lower.has_value());
    CHECK(*r.p_lower + r.p_upper == doctest::Approx(1.0));

    r = naive_test(make(3, std::vector<double>(9, 2.0)));
    CHECK(r.degenerate);
    CHECK(r.p_upper == 1.0);
    CHECK(*r.p_lower == 1.0);
}

TEST_CASE("counting p-values: floor and ties")
{
    const std::vector<double> below{1, 2, 3, 4};
    CHECK(counting_pvalues(below, 10).upper == 0.25);
    CHECK(counting_pvalues(below, 10).lower == 1.0);
    const std::vector<double> tied(5, 7.0);
    CHECK(counting_pvalues(tied, 7.0).upper == 1.0);
    CHECK(counting_pvalues(tied, 7.0).lower == 1.0);
}

TEST_CASE("permutation p-values: minimum, ties and monotonicity")
{
    const std::vector<double> reps{1, 2, 2, 3, 5};
    CHECK(permutation_pvalues(reps, 6).upper == doctest::Approx(1.0 / 6));
    CHECK(permutation_pvalues(reps, 2).upper == doctest::Approx(5.0 / 6));
    CHECK(permutation_pvalues(reps, 2).lower == doctest::Approx(4.0 / 6));
    double previous = 2.0;
    for (double obs = 0; obs <= 6; obs += 0.5) {
        const double p = permutation_pvalues(reps, obs).upper;
        CHECK(p <= previous);
        CHECK(p >= 1.0 / 6);
        previous = p;
    }
}

TEST_CASE("TSC report when every replicate is below the observation")
{
    // Heavy diagonal, empty off-diagonal: every trial-shuffle C is 0.
    const auto m = make(4, {5, 0, 0, 0, 0, 5, 0, 0, 0, 0, 5, 0, 0, 0, 0, 5});
    const auto r = mc_test(m, TestMethod::TSC, 200, 1);
    CHECK(r.p_upper == doctest::Approx(1.0 / 200));
    CHECK(r.statistic == 20);
    const auto p = permutation_test(m, 200, 1);
    CHECK(p.p_upper >= 1.0 / 201);
    CHECK(p.p_upper < 0.1);
    CHECK(mc_test(make(3, std::vector<double>(9, 1.0)), TestMethod::TSC, 50, 2).p_upper == 1.0);
    CHECK_THROWS_AS(mc_test(m, TestMethod::Permutation, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(mc_test(m, TestMethod::TSC, 1, 1), std::invalid_argument);
}

TEST_CASE("permutation test on n = 2 with unit diagonal is about one half")
{
    const auto m = make(2, {1, 0, 0, 1});
    const auto r = permutation_test(m, 20000, 3);
    CHECK(r.statistic == 2);
    CHECK(std::abs(r.p_upper - 0.5) < 0.02);
}

TEST_CASE("permutation test: p values in range, sign coherence, C/U equivalence")
{
    Rng rng(15);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.below(20);
        const auto m = oracle::random_matrix(n, rng);
        const std::size_t B = 199;
        const auto r = permutation_test(m, B, 1000 + rep);
        CHECK(r.p_upper > 0);
        CHECK(r.p_upper <= 1);
        CHECK(r.p_upper >= 1.0 / (B + 1));
        CHECK_FALSE((r.p_upper < 0.5 && *r.p_lower < 0.5));

        // The observed sample is the identity permutation, so its U goes through
        // the same affine map; ties then compare equal in both rankings.
        const auto set = replicate_U(m, ResampleScheme::Permutation, B, 1000 + rep);
        const auto by_u = permutation_pvalues(set.u, permutation_u_from_c(m, m.trace()));
        CHECK(permutation_u_from_c(m, m.trace()) == doctest::Approx(u_stat(m)));
        CHECK(by_u.upper == r.p_upper);
        CHECK(by_u.lower == *r.p_lower);
    }
}

TEST_CASE("run_test dispatch and report fields")
{
    Rng rng(16);
    const auto m = oracle::random_matrix(10, rng);
    for (auto method : {TestMethod::Naive, TestMethod::TSC, TestMethod::TSU, TestMethod::FBU, TestMethod::Permutation}) {
        const auto r = run_test(m, method, 100, 5);
        CHECK(r.method == method);
        CHECK(r.p_upper > 0);
        CHECK(r.p_upper <= 1);
        REQUIRE(r.p_lower.has_value());
        CHECK(*r.p_lower > 0);
        CHECK(*r.p_lower <= 1);
    }
    CHECK(run_test(m, TestMethod::TSU, 100, 5).statistic == u_stat(m));
    CHECK(run_test(m, TestMethod::Permutation, 100, 5).statistic == m.trace());
}

TEST_CASE("permutation test keeps its level on independent Poisson samples")
{
    const auto spec = PoissonSpec{PiecewiseRate::constant(30.0, Window(0.0, 0.1))};
    Rng rng(17);
    const std::size_t N = 600, B = 199;
    std::size_t reject = 0;
    for (std::size_t r = 0; r < N; ++r) {
        std::vector<TrialPair> trials(20);
        for (auto& tr : trials) tr = TrialPair{gen_poisson(spec, rng), gen_poisson(spec, rng)};
        const auto m =
            build_matrix(TrialSample(std::move(trials), 0.1), Window(0.0, 0.1), CoincidenceKind::delayed(0.01));
        reject += permutation_test(m, B, r).p_upper <= 0.05;
    }
    const double rate = double(reject) / N;
    CHECK(rate <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / N));
}
