#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ue/independence.hpp"
#include "ue/multiwindow.hpp"
#include "ue/simulate.hpp"

namespace ue {

/// True dependence of one window: which signs of dependence it intersects.
struct WindowTruth {
    bool positive = false;
    bool negative = false;
    bool dependent() const noexcept { return positive || negative; }
};

/// A window is dependent on a side iff it intersects (closed intervals) a
/// declared region of that sign.
std::vector<WindowTruth> ground_truth(const SimulationConfig& config, const WindowFamily& family);

/// Multiple-testing outcome over the m = 2K signed hypotheses (W, +1) and
/// (W, -1). (W, s) is dependent iff W intersects a region of sign s.
struct ConfusionCounts {
    std::size_t V = 0;     ///< rejected, independent
    std::size_t S = 0;     ///< rejected, dependent
    std::size_t U = 0;     ///< accepted, independent
    std::size_t T_acc = 0; ///< accepted, dependent
    std::size_t R = 0;
    std::size_t m = 0;
    std::size_t m0 = 0;

    bool consistent() const noexcept { return R == V + S && m - R == U + T_acc && m0 == V + U; }
};

/// `rejected_plus[w]` / `rejected_minus[w]`: whether (W, +1) / (W, -1) was rejected.
ConfusionCounts confusion(const std::vector<WindowTruth>& truth, const std::vector<bool>& rejected_plus,
                          const std::vector<bool>& rejected_minus);
ConfusionCounts confusion(const std::vector<WindowTruth>& truth, const DetectionSet& detections);

struct RateEstimates {
    double fdr = 0.0;  ///< mean of (V/R) 1{R > 0}
    double fndr = 0.0; ///< mean of (T/(m-R)) 1{m-R > 0}
    std::size_t runs = 0;
    double mean_rejections = 0.0;
};

/// Multi-window procedures compared by the FDR/FNDR study.
enum class MultiMethod {
    Permutation, ///< permutation UE (BH over pooled p+ and p-)
    TSC,         ///< trial-shuffle C, every p < 0.05 rejected, no correction
    TSC_BH,      ///< trial-shuffle C p-values through the same BH step
};

std::string_view to_string(MultiMethod method);
MultiMethod parse_multi_method(std::string_view name);

/// Rejection threshold of the uncorrected TSC procedure.
inline constexpr double tsc_uncorrected_level = 0.05;

struct ExperimentOptions {
    double delta = 0.01;
    double q = 0.05;
    std::size_t B = 10000;
    std::uint64_t seed = 0;
    std::size_t runs = 1000;
};

/// Signed rejections of one method on one sample.
struct RunRejections {
    std::vector<bool> plus;
    std::vector<bool> minus;
};

RunRejections run_multi_method(const TrialSample& sample, const WindowFamily& family, MultiMethod method,
                               double delta, double q, std::size_t B, std::uint64_t seed);

/// Run r simulates with derive_seed(seed, 2r) and analyses with
/// derive_seed(seed, 2r + 1). Runs are parallel; the reduction is ordered.
RateEstimates estimate_rates(const SimulationConfig& config, const WindowFamily& family, MultiMethod method,
                             const ExperimentOptions& options);

/// Same simulated samples, several methods at once.
std::vector<RateEstimates> estimate_rates(const SimulationConfig& config, const WindowFamily& family,
                                          const std::vector<MultiMethod>& methods, const ExperimentOptions& options);

struct PValueRecord {
    std::size_t rep = 0;
    TestMethod method = TestMethod::Permutation;
    double p = 1.0; ///< p_upper
};

/// `reps` samples from `config`, each tested on `window` by every method.
/// Rep r simulates with derive_seed(seed, 2r) and every method analyses it
/// with derive_seed(seed, 2r + 1).
std::vector<PValueRecord> pvalue_cdf_study(const SimulationConfig& config, const Window& window, double delta,
                                           std::size_t reps, const std::vector<TestMethod>& methods, std::size_t B,
                                           std::uint64_t seed);

/// Fraction of records of `method` with p <= alpha.
double empirical_cdf(const std::vector<PValueRecord>& records, TestMethod method, double alpha);

std::string to_csv(const std::vector<PValueRecord>& records);

struct OpCountSummary {
    double mean_delayed_ops = 0.0;
    double mean_binned_ops = 0.0;
    double delayed_bound = 0.0; ///< 3 l1 L + l2 L + 4 delta l1 l2 L
    double binned_reference = 0.0; ///< 2 L / delta
    std::size_t reps = 0;
};

/// Mean operation counts of both kernels on independent homogeneous Poisson
/// trains over [0, width].
OpCountSummary bench_operation_counts(double rate1, double rate2, double width, double delta, std::size_t reps,
                                      std::uint64_t seed);

nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const RateEstimates& rates);
nlohmann::json to_json(const OpCountSummary& summary);

} // namespace ue
