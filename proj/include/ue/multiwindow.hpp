#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ue/core.hpp"

namespace ue {

/// Windows, possibly overlapping, covering [0, T].
struct WindowFamily {
    std::vector<Window> windows;

    std::size_t size() const noexcept { return windows.size(); }
};

/// [a, a + width] for a = 0, step, 2 step, ... while a + width <= T.
/// Start points are i * step (no accumulated drift) and an end point within
/// 1e-9 of T counts as T.
WindowFamily sliding_windows(double T, double width, double step);

struct BhSelection {
    std::size_t k = 0;      ///< number of selected p-values (0 = none)
    double threshold = 0.0; ///< p^(k), or 0 when k = 0
};

/// Benjamini-Hochberg step-up: k = max{l : p^(l) <= l q / m}. q in (0, 0.5).
BhSelection bh_select(std::span<const double> pvalues, double q);

/// Which p-values enter the BH step.
enum class PValuePool {
    BothSides, ///< all 2K values p+ and p-
    UpperOnly, ///< the K values p+ (only too-many-coincidence detections)
};

struct WindowPValues {
    Window window;
    double p_plus = 1.0;
    double p_minus = 1.0;
};

struct Detection {
    Window window;
    std::size_t index = 0; ///< position in the family
    int epsilon = 0;       ///< +1 too many coincidences, -1 too few
    double p = 1.0;        ///< the p-value that qualified
};

struct DetectionSet {
    double q = 0.05;
    std::size_t B = 0;
    std::uint64_t seed = 0;
    double delta = 0.0;
    PValuePool pool = PValuePool::BothSides;
    std::vector<WindowPValues> windows;
    std::size_t k = 0;
    double threshold = 0.0;
    std::vector<Detection> detections;
};

/// BH over the per-window p-values, then signed detections. Fills k,
/// threshold and detections of the returned set.
DetectionSet select_detections(std::vector<WindowPValues> windows, double q, PValuePool pool);

struct UeOptions {
    double delta = 0.01;
    double q = 0.05;
    std::size_t B = 10000;
    std::uint64_t seed = 0;
    PValuePool pool = PValuePool::BothSides;
};

/// Per-window permutation tests (delayed coincidence count) followed by BH.
/// Windows are processed in parallel; window w draws its permutations from
/// derive_seed(seed, w), so the result does not depend on scheduling.
DetectionSet permutation_ue(const TrialSample& sample, const WindowFamily& family, const UeOptions& options);

/// Per-window p-values only (no selection), same streams as permutation_ue.
std::vector<WindowPValues> permutation_window_pvalues(const TrialSample& sample, const WindowFamily& family,
                                                      double delta, std::size_t B, std::uint64_t seed);

nlohmann::json to_json(const DetectionSet& set);
/// One row per window: a,b,p_plus,p_minus,detected,epsilon.
std::string to_csv(const DetectionSet& set);

} // namespace ue
