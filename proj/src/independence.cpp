#include "ue/independence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ue/resampling.hpp"

namespace ue {

std::string_view to_string(TestMethod method)
{
    switch (method) {
    case TestMethod::Naive: return "N";
    case TestMethod::TSC: return "TSC";
    case TestMethod::TSU: return "TSU";
    case TestMethod::FBU: return "FBU";
    case TestMethod::Permutation: return "P";
    }
    return "?";
}

TestMethod parse_test_method(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "N" || s == "NAIVE") return TestMethod::Naive;
    if (s == "TSC") return TestMethod::TSC;
    if (s == "TSU") return TestMethod::TSU;
    if (s == "FBU") return TestMethod::FBU;
    if (s == "P" || s == "PERMUTATION") return TestMethod::Permutation;
    throw std::invalid_argument("unknown test method `" + std::string(name) + "` (expected N, TSC, TSU, FBU or P)");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

TailPValues permutation_pvalues(std::span<const double> replicates, double observed)
{
    std::size_t ge = 0, le = 0;
    for (double r : replicates) {
        ge += r >= observed;
        le += r <= observed;
    }
    const double denom = static_cast<double>(replicates.size() + 1);
    return {static_cast<double>(1 + ge) / denom, static_cast<double>(1 + le) / denom};
}

TailPValues counting_pvalues(std::span<const double> replicates, double observed)
{
    std::size_t ge = 0, le = 0;
    for (double r : replicates) {
        ge += r >= observed;
        le += r <= observed;
    }
    const double B = static_cast<double>(replicates.size());
    return {static_cast<double>(std::max<std::size_t>(ge, 1)) / B,
            static_cast<double>(std::max<std::size_t>(le, 1)) / B};
}

TestReport naive_test(const CoincidenceMatrix& m)
{
    TestReport r;
    r.method = TestMethod::Naive;
    const auto z = z_stat(m);
    if (!z) {
        r.statistic = 0.0;
        r.p_upper = 1.0;
        r.p_lower = 1.0;
        r.degenerate = true;
        return r;
    }
    // Keep p in (0, 1] even when the Gaussian tail underflows.
    constexpr double tiny = std::numeric_limits<double>::min();
    r.statistic = *z;
    r.p_upper = std::max(normal_cdf(-*z), tiny);
    r.p_lower = std::max(normal_cdf(*z), tiny);
    return r;
}

TestReport mc_test(const CoincidenceMatrix& m, TestMethod method, std::size_t B, std::uint64_t seed)
{
    TestReport r;
    r.method = method;
    r.B = B;
    r.seed = seed;

    TailPValues p;
    switch (method) {
    case TestMethod::TSC: {
        const auto reps = replicate_C(m, ResampleScheme::TrialShuffle, B, seed);
        r.statistic = total_count(m);
        p = counting_pvalues(reps.c, r.statistic);
        break;
    }
    case TestMethod::TSU: {
        const auto reps = replicate_U(m, ResampleScheme::TrialShuffle, B, seed);
        r.statistic = u_stat(m);
        p = counting_pvalues(reps.u, r.statistic);
        break;
    }
    case TestMethod::FBU: {
        const auto reps = replicate_U(m, ResampleScheme::FullBootstrap, B, seed);
        r.statistic = u_stat(m);
        p = counting_pvalues(reps.u, r.statistic);
        break;
    }
    default:
        throw std::invalid_argument("mc_test handles TSC, TSU and FBU only");
    }
    r.p_upper = p.upper;
    r.p_lower = p.lower;
    return r;
}

TestReport permutation_test(const CoincidenceMatrix& m, std::size_t B, std::uint64_t seed)
{
    TestReport r;
    r.method = TestMethod::Permutation;
    r.B = B;
    r.seed = seed;
    r.statistic = total_count(m);
    const auto reps = replicate_C(m, ResampleScheme::Permutation, B, seed);
    const auto p = permutation_pvalues(reps.c, r.statistic);
    r.p_upper = p.upper;
    r.p_lower = p.lower;
    return r;
}

TestReport run_test(const CoincidenceMatrix& m, TestMethod method, std::size_t B, std::uint64_t seed)
{
    switch (method) {
    case TestMethod::Naive: return naive_test(m);
    case TestMethod::Permutation: return permutation_test(m, B, seed);
    default: return mc_test(m, method, B, seed);
    }
}

} // namespace ue
