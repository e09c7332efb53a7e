#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "ue/statistics.hpp"

namespace ue {

/// The single-window independence tests.
///
///  - Naive: Gaussian approximation of Z = U / (sqrt(n) sigma).
///  - TSC:   trial-shuffle replicates of C (uncentered).
///  - TSU:   trial-shuffle replicates of U recentered by U_obs / n.
///  - FBU:   full-bootstrap replicates of U.
///  - Permutation: permutation replicates of C with the (B+1) p-value,
///    exactly level-alpha for every B.
enum class TestMethod { Naive, TSC, TSU, FBU, Permutation };

std::string_view to_string(TestMethod method);
/// Accepts N, TSC, TSU, FBU, P (case-insensitive) and long names.
TestMethod parse_test_method(std::string_view name);

struct TestReport {
    TestMethod method = TestMethod::Permutation;
    double statistic = 0.0; ///< Z (Naive), C (TSC, Permutation) or U (TSU, FBU)
    double p_upper = 1.0;   ///< coincidence count too large
    std::optional<double> p_lower; ///< coincidence count too small
    std::size_t B = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;
};

/// Standard Gaussian c.d.f.
double normal_cdf(double z);

struct TailPValues {
    double upper = 1.0;
    double lower = 1.0;
};

/// (1 + #{r >= obs}) / (B + 1) and (1 + #{r <= obs}) / (B + 1).
TailPValues permutation_pvalues(std::span<const double> replicates, double observed);

/// #{r >= obs} / B and #{r <= obs} / B, each floored at 1 / B.
TailPValues counting_pvalues(std::span<const double> replicates, double observed);

TestReport naive_test(const CoincidenceMatrix& m);

/// TSC, TSU or FBU.
TestReport mc_test(const CoincidenceMatrix& m, TestMethod method, std::size_t B, std::uint64_t seed);

TestReport permutation_test(const CoincidenceMatrix& m, std::size_t B, std::uint64_t seed);

/// Dispatches to the three functions above.
TestReport run_test(const CoincidenceMatrix& m, TestMethod method, std::size_t B, std::uint64_t seed);

} // namespace ue
