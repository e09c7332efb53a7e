#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library kernel it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "ue/rng.hpp"
#include "ue/statistics.hpp"

namespace ue::oracle {

/// O(n1 n2) enumeration of |u - v| <= delta.
inline std::uint64_t brute_delayed(std::span<const double> x1, std::span<const double> x2, double delta)
{
    std::uint64_t c = 0;
    for (double u : x1)
        for (double v : x2) c += std::abs(u - v) <= delta;
    return c;
}

/// Per-bin membership scan: bin l = [a + l delta, a + (l+1) delta), last bin closed.
inline std::uint64_t brute_binned(std::span<const double> x1, std::span<const double> x2, double a, double b,
                                  std::size_t M)
{
    const double delta = (b - a) / static_cast<double>(M);
    auto hits = [&](std::span<const double> x, std::size_t l) {
        const double lo = a + static_cast<double>(l) * delta;
        const double hi = a + static_cast<double>(l + 1) * delta;
        for (double t : x) {
            if (l + 1 == M ? (t >= lo && t <= b) : (t >= lo && t < hi)) return true;
        }
        return false;
    };
    std::uint64_t c = 0;
    for (std::size_t l = 0; l < M; ++l) c += hits(x1, l) && hits(x2, l);
    return c;
}

inline double h_literal(const CoincidenceMatrix& m, std::size_t i, std::size_t j)
{
    return 0.5 * (m(i, i) + m(j, j) - m(i, j) - m(j, i));
}

/// The literal triple sum over all-distinct (i, j, k).
inline double sigma2_triple(const CoincidenceMatrix& m)
{
    const std::size_t n = m.n();
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (i != j && i != k && j != k) s += static_cast<long double>(h_literal(m, i, j)) * h_literal(m, i, k);
    const double nd = static_cast<double>(n);
    return static_cast<double>(4.0L * s / (nd * (nd - 1) * (nd - 2)));
}

inline double c0_double_sum(const CoincidenceMatrix& m)
{
    long double s = 0.0L;
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j)
            if (i != j) s += m(i, j);
    return static_cast<double>(s / static_cast<long double>(m.n() - 1));
}

/// U on a permutation sample by the literal double sum over k != k'.
inline double permutation_u_literal(const CoincidenceMatrix& m, std::span<const std::size_t> perm)
{
    const std::size_t n = m.n();
    long double c = 0.0L, cross = 0.0L;
    for (std::size_t k = 0; k < n; ++k) c += m(k, perm[k]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t kk = 0; kk < n; ++kk)
            if (k != kk) cross += m(k, perm[kk]);
    return static_cast<double>(c - cross / static_cast<long double>(n - 1));
}

/// Random n x n matrix; integer counts when `integral`, otherwise reals.
inline CoincidenceMatrix random_matrix(std::size_t n, Rng& rng, bool integral = true, double scale = 6.0)
{
    std::vector<double> v(n * n);
    for (auto& x : v) x = integral ? static_cast<double>(rng.below(static_cast<std::uint64_t>(scale) + 1))
                                   : rng.uniform() * scale;
    return CoincidenceMatrix(n, std::move(v), CoincidenceKind::delayed(0.01), Window(0.0, 0.1));
}

inline double rel_diff(double a, double b, double scale)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

/// Upper-tail chi-square critical value.
inline double chi2_critical(double dof, double alpha)
{
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), alpha));
}

/// Pearson statistic; `expected` cells are merged from the tail until each
/// holds at least 5.
inline double pearson(std::vector<double> observed, std::vector<double> expected, std::size_t& dof)
{
    std::vector<double> o, e;
    double oa = 0, ea = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        oa += observed[i];
        ea += expected[i];
        if (ea >= 5.0) {
            o.push_back(oa);
            e.push_back(ea);
            oa = ea = 0;
        }
    }
    if (ea > 0 || oa > 0) {
        if (e.empty()) {
            o.push_back(oa);
            e.push_back(ea);
        } else {
            o.back() += oa;
            e.back() += ea;
        }
    }
    double x2 = 0;
    for (std::size_t i = 0; i < e.size(); ++i) x2 += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
    dof = e.size() - 1;
    return x2;
}

/// Two-sample Kolmogorov-Smirnov distance (handles ties).
inline double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

inline double normal_cdf_ref(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// One-sample KS distance to the standard normal.
inline double ks_normal(std::vector<double> x)
{
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf_ref(x[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

inline double poisson_pmf(std::size_t k, double mean)
{
    return std::exp(static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
}

} // namespace ue::oracle
