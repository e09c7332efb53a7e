#include "ue/serial.hpp"

#include <stdexcept>

#include "replicate_kernel.hpp"
#include "ue/independence.hpp"

namespace ue::serial {

CoincidenceMatrix build_matrix(const TrialSample& sample, const Window& w, const CoincidenceKind& kind)
{
    const std::size_t n = sample.size();
    if (n < 2) throw std::invalid_argument("coincidence matrix needs n >= 2 trials");
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x1 = restrict_view(sample[i].x1.times(), w);
        for (std::size_t j = 0; j < n; ++j)
            values[i * n + j] = static_cast<double>(count(kind, x1, restrict_view(sample[j].x2.times(), w), w));
    }
    return CoincidenceMatrix(n, std::move(values), kind, w);
}

namespace {

ReplicateSet run(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed, bool need_u)
{
    detail::check_replicate_args(m, B);
    ReplicateSet set{scheme, B, std::vector<double>(B), {}, seed};
    if (need_u) set.u.resize(B);
    detail::ReplicateWorkspace ws;
    for (std::size_t b = 0; b < B; ++b) {
        Rng rng(seed, b);
        const auto v = detail::one_replicate(m, scheme, rng, ws, need_u);
        set.c[b] = v.c;
        if (need_u) set.u[b] = v.u;
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
    return run(m, scheme, B, seed, false);
}

ReplicateSet replicate_U(const CoincidenceMatrix& m, ResampleScheme scheme, std::size_t B, std::uint64_t seed)
{
    return run(m, scheme, B, seed, true);
}

std::vector<WindowPValues> permutation_window_pvalues(const TrialSample& sample, const WindowFamily& family,
                                                      double delta, std::size_t B, std::uint64_t seed)
{
    const auto kind = CoincidenceKind::delayed(delta);
    std::vector<WindowPValues> out;
    out.reserve(family.size());
    for (std::size_t w = 0; w < family.size(); ++w) {
        const auto m = serial::build_matrix(sample, family.windows[w], kind);
        WindowPValues pv{family.windows[w]};
        if (!m.all_zero()) {
            const auto reps = run(m, ResampleScheme::Permutation, B, derive_seed(seed, w), false);
            const auto p = permutation_pvalues(reps.c, total_count(m));
            pv.p_plus = p.upper;
            pv.p_minus = p.lower;
        }
        out.push_back(pv);
    }
    return out;
}

} // namespace ue::serial
