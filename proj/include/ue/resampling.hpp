#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ue/rng.hpp"
#include "ue/statistics.hpp"

namespace ue {

enum class ResampleScheme { TrialShuffle, FullBootstrap, Permutation };

std::string_view to_string(ResampleScheme scheme);

/// (trial of neuron 1, trial of neuron 2) for one resampled pair.
struct IndexPair {
    std::size_t i;
    std::size_t j;
};

/// n i.i.d. pairs uniform on {(i, j) : i != j}.
std::vector<IndexPair> draw_trial_shuffle(std::size_t n, Rng& rng);
/// n i.i.d. pairs with i and j independent and uniform on {0..n-1}.
std::vector<IndexPair> draw_full_bootstrap(std::size_t n, Rng& rng);
/// Uniform permutation of {0..n-1} (Fisher-Yates).
std::vector<std::size_t> draw_permutation(std::size_t n, Rng& rng);

/// C of a resampled sample: sum_k a(i_k, j_k).
double resampled_c(const CoincidenceMatrix& m, std::span<const IndexPair> picks);

/// U of a resampled sample:
///     sum_k a(i_k, j_k) - 1/(n-1) * sum_{k != k'} a(i_k, j_k')
/// The cross sum is accumulated through row/column multiplicities, O(n^2)
/// in the worst case.
double resampled_u(const CoincidenceMatrix& m, std::span<const IndexPair> picks);

/// Exact affine link between C and U on any permutation sample:
///     U = n/(n-1) * C - 1/(n-1) * sum_{i,j} a(i, j)
double permutation_u_from_c(const CoincidenceMatrix& m, double c);

/// B replicate values for one scheme. Replicate b draws from
/// Rng(seed, b), so the set is a pure function of (matrix, scheme, B, seed).
struct ReplicateSet {
    ResampleScheme scheme = ResampleScheme::Permutation;
    std::size_t B = 0;
    std::vector<double> c;
    std::vector<double> u; ///< centered; empty when only C was requested
    std::uint64_t seed = 0;
};

/// Replicate C values only. Parallel over replicates.
ReplicateSet replicate_C(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed);

/// Replicate C and centered U values. For TrialShuffle the stored U is
/// U^TS + U_obs/n; the other schemes are already conditionally centered.
ReplicateSet replicate_U(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed);

/// Raw (uncentered) trial-shuffle U values, same streams as replicate_U.
std::vector<double> replicate_raw_trial_shuffle_u(const CoincidenceMatrix& m, std::size_t B, std::uint64_t seed);

/// ceil(t * B)-th order statistic (type-1 empirical quantile), t in (0, 1).
double empirical_quantile(std::span<const double> values, double t);

} // namespace ue
