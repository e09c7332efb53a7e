#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ue/coincidence.hpp"
#include "ue/core.hpp"

namespace ue {

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// a(i, j) = phi(X1_i, X2_j) on one window, row-major, n >= 2.
///
/// Every statistic and every resample reads this table; nothing downstream
/// touches spike times again.
class CoincidenceMatrix {
  public:
    CoincidenceMatrix(std::size_t n, std::vector<double> values, CoincidenceKind kind, Window window);

    std::size_t n() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }
    std::span<const double> values() const noexcept { return values_; }
    const CoincidenceKind& kind() const noexcept { return kind_; }
    const Window& window() const noexcept { return window_; }

    /// Sum over all n^2 entries.
    double total_sum() const noexcept { return total_sum_; }
    /// Sum over the diagonal.
    double trace() const noexcept { return trace_; }
    /// True when no entry is positive.
    bool all_zero() const noexcept { return all_zero_; }

  private:
    std::size_t n_;
    std::vector<double> values_;
    CoincidenceKind kind_;
    Window window_;
    double total_sum_ = 0.0;
    double trace_ = 0.0;
    bool all_zero_ = true;
};

/// Builds the matrix with one delayed/binned count per (i, j). Rows are
/// computed in parallel (OpenMP); the output is independent of thread count.
CoincidenceMatrix build_matrix(const TrialSample& sample, const Window& w, const CoincidenceKind& kind);

double total_count(const CoincidenceMatrix& m);
double c0_hat(const CoincidenceMatrix& m);
double u_stat(const CoincidenceMatrix& m);
double h_kernel(const CoincidenceMatrix& m, std::size_t i, std::size_t j);

struct VarianceEstimate {
    double value = 0.0;   ///< clamped at 0
    double raw = 0.0;     ///< before clamping
    bool clamped = false; ///< raw value was negative
};

/// Variance estimator of U / sqrt(n), O(n^2) via sum_i (S_i^2 - Q_i).
/// Throws std::invalid_argument when n < 3.
VarianceEstimate sigma2_hat(const CoincidenceMatrix& m);

/// U / sqrt(n * sigma2); empty when sigma2 is 0 (degenerate).
std::optional<double> z_stat(const CoincidenceMatrix& m);

struct WindowStats {
    double c_obs = 0.0;
    double c0_hat = 0.0;
    double u_obs = 0.0;
    double sigma2_hat = 0.0;
    std::optional<double> z_obs;
};

WindowStats window_stats(const CoincidenceMatrix& m);

} // namespace ue
