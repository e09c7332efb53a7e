#include "ue/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "replicate_kernel.hpp"

namespace ue {

std::string_view to_string(ResampleScheme scheme)
{
    switch (scheme) {
    case ResampleScheme::TrialShuffle: return "trial_shuffle";
    case ResampleScheme::FullBootstrap: return "full_bootstrap";
    case ResampleScheme::Permutation: return "permutation";
    }
    return "unknown";
}

namespace detail {

void fill_trial_shuffle(std::size_t n, Rng& rng, std::vector<IndexPair>& out)
{
    out.resize(n);
    for (auto& p : out) {
        p.i = rng.below(n);
        p.j = rng.below(n - 1);
        if (p.j >= p.i) ++p.j;
    }
}

void fill_full_bootstrap(std::size_t n, Rng& rng, std::vector<IndexPair>& out)
{
    out.resize(n);
    for (auto& p : out) {
        p.i = rng.below(n);
        p.j = rng.below(n);
    }
}

void fill_permutation(std::size_t n, Rng& rng, std::vector<std::size_t>& out)
{
    out.resize(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    for (std::size_t k = n - 1; k > 0; --k) std::swap(out[k], out[rng.below(k + 1)]);
}

double cross_sum(const CoincidenceMatrix& m, std::span<const IndexPair> picks, ReplicateWorkspace& ws)
{
    const std::size_t n = m.n();
    ws.row_mult.assign(n, 0.0);
    ws.col_mult.assign(n, 0.0);
    for (const auto& p : picks) {
        ws.row_mult[p.i] += 1.0;
        ws.col_mult[p.j] += 1.0;
    }
    ws.rows.clear();
    ws.cols.clear();
    for (std::size_t k = 0; k < n; ++k) {
        if (ws.row_mult[k] > 0.0) ws.rows.push_back(k);
        if (ws.col_mult[k] > 0.0) ws.cols.push_back(k);
    }
    // sum_{k,k'} a(i_k, j_k') = sum_i r_i * sum_j c_j * a(i, j)
    CompensatedSum full;
    for (std::size_t i : ws.rows) {
        const auto row = m.row(i);
        double acc = 0.0;
        for (std::size_t j : ws.cols) acc += ws.col_mult[j] * row[j];
        full.add(ws.row_mult[i] * acc);
    }
    return full.value();
}

ReplicateValue one_replicate(const CoincidenceMatrix& m, ResampleScheme scheme, Rng& rng, ReplicateWorkspace& ws,
                             bool need_u)
{
    const std::size_t n = m.n();
    ReplicateValue out;
    if (scheme == ResampleScheme::Permutation) {
        fill_permutation(n, rng, ws.perm);
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += m(i, ws.perm[i]);
        out.c = c;
        if (need_u) out.u = permutation_u_from_c(m, c);
        return out;
    }

    if (scheme == ResampleScheme::TrialShuffle)
        fill_trial_shuffle(n, rng, ws.picks);
    else
        fill_full_bootstrap(n, rng, ws.picks);

    double c = 0.0;
    for (const auto& p : ws.picks) c += m(p.i, p.j);
    out.c = c;
    if (need_u) out.u = c - (cross_sum(m, ws.picks, ws) - c) / static_cast<double>(n - 1);
    return out;
}

void check_replicate_args(const CoincidenceMatrix& m, std::size_t B)
{
    if (m.n() < 2) throw std::invalid_argument("resampling needs n >= 2 trials");
    if (B < 2) throw std::invalid_argument("resampling needs B >= 2 replicates");
}

} // namespace detail

std::vector<IndexPair> draw_trial_shuffle(std::size_t n, Rng& rng)
{
    if (n < 2) throw std::invalid_argument("trial shuffling needs n >= 2 trials");
    std::vector<IndexPair> out;
    detail::fill_trial_shuffle(n, rng, out);
    return out;
}

std::vector<IndexPair> draw_full_bootstrap(std::size_t n, Rng& rng)
{
    if (n < 1) throw std::invalid_argument("bootstrap needs n >= 1 trials");
    std::vector<IndexPair> out;
    detail::fill_full_bootstrap(n, rng, out);
    return out;
}

std::vector<std::size_t> draw_permutation(std::size_t n, Rng& rng)
{
    if (n < 1) throw std::invalid_argument("permutation needs n >= 1");
    std::vector<std::size_t> out;
    detail::fill_permutation(n, rng, out);
    return out;
}

double resampled_c(const CoincidenceMatrix& m, std::span<const IndexPair> picks)
{
    double c = 0.0;
    for (const auto& p : picks) c += m(p.i, p.j);
    return c;
}

double resampled_u(const CoincidenceMatrix& m, std::span<const IndexPair> picks)
{
    if (picks.size() != m.n()) throw std::invalid_argument("resample must pick exactly n pairs");
    detail::ReplicateWorkspace ws;
    const double c = resampled_c(m, picks);
    return c - (detail::cross_sum(m, picks, ws) - c) / static_cast<double>(m.n() - 1);
}

double permutation_u_from_c(const CoincidenceMatrix& m, double c)
{
    const double nm1 = static_cast<double>(m.n() - 1);
    return (1.0 + 1.0 / nm1) * c - m.total_sum() / nm1;
}

namespace {

ReplicateSet run_replicates(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed,
                            bool need_u)
{
    detail::check_replicate_args(m, B);
    ReplicateSet set;
    set.scheme = scheme;
    set.B = B;
    set.seed = seed;
    set.c.resize(B);
    if (need_u) set.u.resize(B);

    const auto count = static_cast<std::ptrdiff_t>(B);
#pragma omp parallel
    {
        detail::ReplicateWorkspace ws;
#pragma omp for schedule(static)
        for (std::ptrdiff_t b = 0; b < count; ++b) {
            Rng rng(seed, static_cast<std::uint64_t>(b));
            const auto v = detail::one_replicate(m, scheme, rng, ws, need_u);
            set.c[static_cast<std::size_t>(b)] = v.c;
            if (need_u) set.u[static_cast<std::size_t>(b)] = v.u;
        }
    }

    if (need_u && scheme == ResampleScheme::TrialShuffle) {
        const double shift = u_stat(m) / static_cast<double>(m.n());
        for (double& u : set.u) u += shift;
    }
    return set;
}

} // namespace

ReplicateSet replicate_C(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed)
{
    return run_replicates(m, scheme, B, seed, false);
}

ReplicateSet replicate_U(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed)
{
    return run_replicates(m, scheme, B, seed, true);
}

std::vector<double> replicate_raw_trial_shuffle_u(const CoincidenceMatrix& m, std::size_t B, std::uint64_t seed)
{
    auto set = run_replicates(m, ResampleScheme::TrialShuffle, B, seed, true);
    const double shift = u_stat(m) / static_cast<double>(m.n());
    for (double& u : set.u) u -= shift;
    return std::move(set.u);
}

double empirical_quantile(std::span<const double> values, double t)
{
    if (values.empty()) throw std::invalid_argument("empirical quantile of an empty set");
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("quantile order must lie in (0, 1)");
    std::vector<double> sorted(values.begin(), values.end());
    const double x = t * static_cast<double>(sorted.size());
    double rank = std::ceil(x);
    // t * B that lands a rounding error above an integer means that integer.
    if (rank - x > 1.0 - 1e-9) rank -= 1.0;
    const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, sorted.size());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
    return sorted[k - 1];
}

} // namespace ue
