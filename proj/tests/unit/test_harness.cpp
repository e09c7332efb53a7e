#include <doctest.h>

#include "ue/harness.hpp"

using namespace ue;

namespace {

SimulationConfig poisson_config(double T, std::size_t n, double rate)
{
    return parse_simulation_config(
        {{"T", T}, {"n", n}, {"segments", {{{"type", "poisson"}, {"rate1", rate}, {"rate2", rate}}}}});
}

} // namespace

TEST_CASE("ground truth labels")
{
    auto config = poisson_config(2.0, 5, 30.0);
    const auto family = sliding_windows(2.0, 0.1, 0.05);
    for (const auto& t : ground_truth(config, family)) CHECK_FALSE(t.dependent());

    config.dependence = {DependenceRegion{Window(0.5, 1.0), +1}, DependenceRegion{Window(1.5, 1.7), -1}};
    WindowFamily f;
    f.windows = {Window(0.45, 0.55), Window(0.4, 0.5), Window(0.3, 0.4), Window(1.45, 1.55), Window(0.95, 1.6)};
    const auto truth = ground_truth(config, f);
    CHECK(truth[0].positive);
    CHECK(truth[1].positive);
    CHECK_FALSE(truth[2].dependent());
    CHECK(truth[3].negative);
    CHECK_FALSE(truth[3].positive);
    CHECK(truth[4].positive);
    CHECK(truth[4].negative);
}

TEST_CASE("confusion counts are consistent")
{
    const std::vector<WindowTruth> truth{{true, false}, {false, false}, {false, true}};
    const auto c = confusion(truth, {true, true, false}, {false, false, false});
    CHECK(c.m == 6);
    CHECK(c.m0 == 4);
    CHECK(c.R == 2);
    CHECK(c.V == 1);
    CHECK(c.S == 1);
    CHECK(c.T_acc == 1);
    CHECK(c.U == 3);
    CHECK(c.consistent());
    CHECK_THROWS_AS(confusion(truth, {true}, {false}), std::invalid_argument);

    DetectionSet d;
    d.windows.resize(3, WindowPValues{Window(0, 1)});
    d.detections = {Detection{Window(0, 1), 2, -1, 0.001}};
    const auto c2 = confusion(truth, d);
    CHECK(c2.S == 1);
    CHECK(c2.R == 1);
    CHECK(c2.consistent());
}

TEST_CASE("method names")
{
    for (auto m : {MultiMethod::Permutation, MultiMethod::TSC, MultiMethod::TSC_BH})
        CHECK(parse_multi_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_multi_method("x"), std::invalid_argument);
}

TEST_CASE("no detections in any run means FDR = 0")
{
    // Silent neurons: every window degenerate, p = 1.
    const auto config = poisson_config(1.0, 4, 0.0);
    const auto family = sliding_windows(1.0, 0.1, 0.1);
    const auto rates = estimate_rates(config, family, MultiMethod::Permutation,
                                      ExperimentOptions{.delta = 0.01, .q = 0.05, .B = 20, .seed = 1, .runs = 5});
    CHECK(rates.fdr == 0.0);
    CHECK(rates.fndr == 0.0);
    CHECK(rates.runs == 5);
    CHECK(rates.mean_rejections == 0.0);
}

TEST_CASE("estimate_rates is deterministic and the multi-method form matches the single one")
{
    auto config = poisson_config(1.0, 10, 40.0);
    config.dependence = {DependenceRegion{Window(0.0, 0.2), +1}};
    const auto family = sliding_windows(1.0, 0.1, 0.05);
    const ExperimentOptions opt{.delta = 0.01, .q = 0.05, .B = 50, .seed = 3, .runs = 6};
    const auto a = estimate_rates(config, family, MultiMethod::TSC, opt);
    const auto b = estimate_rates(config, family, MultiMethod::TSC, opt);
    CHECK(a.fdr == b.fdr);
    CHECK(a.fndr == b.fndr);
    const auto both = estimate_rates(config, family, {MultiMethod::Permutation, MultiMethod::TSC}, opt);
    REQUIRE(both.size() == 2);
    CHECK(both[1].fdr == a.fdr);
    CHECK(both[1].fndr == a.fndr);
    for (const auto& r : both) {
        CHECK(r.fdr >= 0.0);
        CHECK(r.fdr <= 1.0);
        CHECK(r.fndr >= 0.0);
        CHECK(r.fndr <= 1.0);
    }
}

TEST_CASE("p-value study tables")
{
    const auto config = poisson_config(0.1, 8, 30.0);
    CHECK(pvalue_cdf_study(config, Window(0.0, 0.1), 0.01, 0, {TestMethod::Permutation}, 50, 1).empty());

    const auto rows =
        pvalue_cdf_study(config, Window(0.0, 0.1), 0.01, 10, {TestMethod::Permutation, TestMethod::TSC}, 50, 1);
    CHECK(rows.size() == 20);
    const auto again =
        pvalue_cdf_study(config, Window(0.0, 0.1), 0.01, 10, {TestMethod::Permutation, TestMethod::TSC}, 50, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].p == again[i].p);
        CHECK(rows[i].p > 0.0);
        CHECK(rows[i].p <= 1.0);
    }
    CHECK(empirical_cdf(rows, TestMethod::Permutation, 1.0) == 1.0);
    const auto csv = to_csv(rows);
    CHECK(csv.rfind("rep,method,p\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
}

TEST_CASE("operation count summary")
{
    const auto s = bench_operation_counts(50, 50, 0.1, 0.005, 2000, 1);
    CHECK(s.reps == 2000);
    CHECK(s.mean_binned_ops == 40.0);
    CHECK(s.binned_reference == doctest::Approx(40.0));
    CHECK(s.delayed_bound == doctest::Approx(3 * 5 + 5 + 4 * 0.005 * 50 * 50 * 0.1));
    CHECK(s.mean_delayed_ops <= s.delayed_bound);
    CHECK(s.mean_delayed_ops > 15);
    const auto j = to_json(s);
    CHECK(j.contains("mean_delayed_ops"));
}
