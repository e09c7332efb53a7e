#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ue/core.hpp"
#include "ue/rng.hpp"

namespace ue {

/// Piecewise-constant non-negative rate (Hz) on [breakpoints.front(), breakpoints.back()].
class PiecewiseRate {
  public:
    PiecewiseRate(std::vector<double> breakpoints, std::vector<double> rates);
    static PiecewiseRate constant(double rate, const Window& span);

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> rates() const noexcept { return rates_; }
    double start() const noexcept { return breakpoints_.front(); }
    double end() const noexcept { return breakpoints_.back(); }
    /// Rate at t (0 outside the span).
    double at(double t) const noexcept;
    double integral() const noexcept;

  private:
    std::vector<double> breakpoints_;
    std::vector<double> rates_;
};

struct PoissonSpec {
    PiecewiseRate rate;
};

struct InjectionSpec {
    PoissonSpec base1;
    PoissonSpec base2;
    PoissonSpec inject;
};

/// Signed piecewise-constant interaction function on [0, support):
/// value v_k on [breakpoints[k], breakpoints[k+1]), 0 elsewhere.
class StepKernel {
  public:
    StepKernel() = default;
    StepKernel(std::vector<double> breakpoints, std::vector<double> values);

    double at(double lag) const noexcept;
    double support() const noexcept { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
    double positive_integral() const noexcept;
    /// sup of max(h, 0) over lags >= `lag`.
    double positive_sup_from(double lag) const noexcept;
    bool empty() const noexcept { return values_.empty(); }

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Bivariate Hawkes process on a span. kernels[from][to] is h_{from -> to}
/// (0 = neuron 1, 1 = neuron 2); intensities are clipped at 0 so negative
/// kernels act as inhibition.
class HawkesSpec {
  public:
    HawkesSpec(std::array<double, 2> spontaneous, std::array<std::array<StepKernel, 2>, 2> kernels, Window span);

    const std::array<double, 2>& spontaneous() const noexcept { return spontaneous_; }
    const StepKernel& kernel(int from, int to) const noexcept { return kernels_[from][to]; }
    const Window& span() const noexcept { return span_; }
    /// Spectral radius of the matrix of positive-part kernel integrals.
    double branching_ratio() const noexcept;
    double max_support() const noexcept;

  private:
    std::array<double, 2> spontaneous_;
    std::array<std::array<StepKernel, 2>, 2> kernels_;
    Window span_;
};

SpikeTrain gen_poisson(const PoissonSpec& spec, Rng& rng);

/// (N1 u Ninj, N2 u Ninj); the three components use disjoint substreams.
TrialPair gen_injection(const InjectionSpec& spec, Rng& rng);

/// Ogata thinning; exact for piecewise-constant kernels.
TrialPair gen_hawkes(const HawkesSpec& spec, Rng& rng);

/// Sorted union of two trains (coincident times kept once).
SpikeTrain merge(const SpikeTrain& a, const SpikeTrain& b);

// --- simulation configs ------------------------------------------------------

struct PoissonPairSegment {
    PoissonSpec x1;
    PoissonSpec x2;
};

struct Segment {
    Window span;
    std::variant<PoissonPairSegment, InjectionSpec, HawkesSpec> process;
};

/// Window of declared dependence and its expected sign (+1 excess, -1 deficit
/// of coincidences).
struct DependenceRegion {
    Window window;
    int sign = +1;
};

/// A trial is the concatenation of independent draws of each segment; a
/// Hawkes segment starts with empty history.
struct SimulationConfig {
    double T = 1.0;
    std::size_t n = 1;
    std::uint64_t seed = 0;
    std::vector<Segment> segments;
    std::vector<DependenceRegion> dependence;
};

/// Parses the JSON config:
///
///     {"T": 2.0, "n": 50, "seed": 1,
///      "segments": [
///        {"type": "poisson", "start": 0, "end": 0.5, "rate1": 30,
///         "rate2": {"breakpoints": [0, 0.25, 0.5], "rates": [20, 40]}},
///        {"type": "injection", ..., "base1": 27, "base2": 27, "inject": 3},
///        {"type": "hawkes", ..., "spontaneous": [20, 20],
///         "kernels": {"1->2": {"breakpoints": [0, 0.005], "values": [60]}}}],
///      "dependence": [{"a": 0.5, "b": 1.0, "sign": 1}]}
///
/// Rates may be numbers or breakpoint lists in absolute time spanning the
/// segment. Omitted kernels are zero. Throws std::invalid_argument.
SimulationConfig parse_simulation_config(const nlohmann::json& j);
SimulationConfig load_simulation_config(const std::string& path);

TrialPair simulate_trial(const SimulationConfig& config, Rng& rng);

/// n trials; trial i uses Rng(seed, i). Parallel over trials.
TrialSample simulate_sample(const SimulationConfig& config, std::uint64_t seed);

} // namespace ue
