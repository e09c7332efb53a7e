#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the
// per-item code with the parallel versions and must produce bit-identical
// results; tests compare the two and bench/ times them.

#include <cstdint>
#include <vector>

#include "ue/multiwindow.hpp"
#include "ue/resampling.hpp"
#include "ue/statistics.hpp"

namespace ue::serial {

CoincidenceMatrix build_matrix(const TrialSample& sample, const Window& w, const CoincidenceKind& kind);

ReplicateSet replicate_C(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed);
ReplicateSet replicate_U(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed);

std::vector<WindowPValues> permutation_window_pvalues(const TrialSample& sample, const WindowFamily& family,
                                                      double delta, std::size_t B, std::uint64_t seed);

} // namespace ue::serial
