#include "ue/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ue {

CoincidenceMatrix::CoincidenceMatrix(std::size_t n, std::vector<double> values, CoincidenceKind kind, Window window)
    : n_(n), values_(std::move(values)), kind_(kind), window_(window)
{
    if (n_ < 2) throw std::invalid_argument("coincidence matrix needs n >= 2 trials");
    if (values_.size() != n_ * n_)
        throw std::invalid_argument("coincidence matrix needs n*n = " + std::to_string(n_ * n_) + " entries, got " +
                                    std::to_string(values_.size()));
    CompensatedSum total, diag;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = values_[i * n_ + j];
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("coincidence matrix entries must be finite and non-negative");
            if (v > 0.0) all_zero_ = false;
            total.add(v);
            if (i == j) diag.add(v);
        }
    }
    total_sum_ = total.value();
    trace_ = diag.value();
}

CoincidenceMatrix build_matrix(const TrialSample& sample, const Window& w, const CoincidenceKind& kind)
{
    const std::size_t n = sample.size();
    if (n < 2) throw std::invalid_argument("coincidence matrix needs n >= 2 trials");
    if (kind.type == CoincidenceKind::Type::Binned) (void)bin_count(w, kind.delta);

    std::vector<std::span<const double>> x1(n), x2(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = restrict_view(sample[i].x1.times(), w);
        x2[i] = restrict_view(sample[i].x2.times(), w);
    }

    std::vector<double> values(n * n);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto row = static_cast<std::size_t>(i);
        for (std::size_t j = 0; j < n; ++j)
            values[row * n + j] = static_cast<double>(count(kind, x1[row], x2[j], w));
    }
    return CoincidenceMatrix(n, std::move(values), kind, w);
}

double total_count(const CoincidenceMatrix& m) { return m.trace(); }

double c0_hat(const CoincidenceMatrix& m)
{
    return (m.total_sum() - m.trace()) / static_cast<double>(m.n() - 1);
}

double u_stat(const CoincidenceMatrix& m) { return total_count(m) - c0_hat(m); }

double h_kernel(const CoincidenceMatrix& m, std::size_t i, std::size_t j)
{
    return 0.5 * (m(i, i) + m(j, j) - m(i, j) - m(j, i));
}

VarianceEstimate sigma2_hat(const CoincidenceMatrix& m)
{
    const std::size_t n = m.n();
    if (n < 3) throw std::invalid_argument("variance estimator undefined for n < 3 trials");

    // Per-row terms are summed in a fixed order afterwards so the result does
    // not depend on the thread count.
    std::vector<double> terms(n);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        CompensatedSum s, q;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double h = h_kernel(m, i, j);
            s.add(h);
            q.add(h * h);
        }
        terms[i] = s.value() * s.value() - q.value();
    }
    CompensatedSum acc;
    for (double t : terms) acc.add(t);

    const double nd = static_cast<double>(n);
    VarianceEstimate out;
    out.raw = 4.0 * acc.value() / (nd * (nd - 1.0) * (nd - 2.0));
    out.clamped = out.raw < 0.0;
    out.value = out.clamped ? 0.0 : out.raw;
    return out;
}

std::optional<double> z_stat(const CoincidenceMatrix& m)
{
    const double s2 = sigma2_hat(m).value;
    if (!(s2 > 0.0)) return std::nullopt;
    return u_stat(m) / std::sqrt(static_cast<double>(m.n()) * s2);
}

WindowStats window_stats(const CoincidenceMatrix& m)
{
    WindowStats s;
    s.c_obs = total_count(m);
    s.c0_hat = c0_hat(m);
    s.u_obs = s.c_obs - s.c0_hat;
    if (m.n() >= 3) {
        s.sigma2_hat = sigma2_hat(m).value;
        if (s.sigma2_hat > 0.0) s.z_obs = s.u_obs / std::sqrt(static_cast<double>(m.n()) * s.sigma2_hat);
    }
    return s;
}

} // namespace ue
