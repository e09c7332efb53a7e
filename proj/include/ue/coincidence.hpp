#pragma once

#include <cstdint>
#include <span>

#include "ue/core.hpp"

namespace ue {

/// Operation tally for the counting kernels.
///
/// Delayed counting charges one unit per executed step of the two-pointer
/// sweep: step 1 (lower bound), each step-2 advance, step 3 (exhaustion
/// check), step 4.a (upper bound), and two units per step-4.b coincidence
/// (count increment and pointer advance). Binned counting charges the two
/// indicator reads per bin on already-binned data.
struct OpCounter {
    std::uint64_t comparisons = 0; ///< spike-vs-bound comparisons evaluated
    std::uint64_t total = 0;       ///< all charged operations
};

struct CoincidenceKind {
    enum class Type { Binned, Delayed };

    Type type = Type::Delayed;
    double delta = 0.0; ///< delay (Delayed) or bin width (Binned), seconds

    static CoincidenceKind delayed(double delta);
    static CoincidenceKind binned(double delta);

    friend bool operator==(const CoincidenceKind&, const CoincidenceKind&) = default;
};

/// #{(u, v) in x1 x x2 : |u - v| <= delta} by a single forward sweep.
/// Both inputs must be sorted and already restricted to the window.
std::uint64_t delayed_count(std::span<const double> x1, std::span<const double> x2, double delta,
                            OpCounter* counter = nullptr);

/// Number of bins M = (b - a) / delta; throws unless integral and >= 2.
std::size_t bin_count(const Window& w, double delta);

/// Number of delta-bins of `w` hit by both trains. Bins are half-open except
/// the last, which also holds b.
std::uint64_t binned_count(std::span<const double> x1, std::span<const double> x2, const Window& w, double delta,
                           OpCounter* counter = nullptr);

std::uint64_t count(const CoincidenceKind& kind, std::span<const double> x1, std::span<const double> x2,
                    const Window& w, OpCounter* counter = nullptr);

} // namespace ue
