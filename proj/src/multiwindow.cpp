#include "ue/multiwindow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ue/independence.hpp"
#include "ue/resampling.hpp"
#include "ue/statistics.hpp"

namespace ue {

WindowFamily sliding_windows(double T, double width, double step)
{
    if (!(T > 0.0) || !(width > 0.0) || !(step > 0.0) || !std::isfinite(T) || !std::isfinite(width) ||
        !std::isfinite(step))
        throw std::invalid_argument("sliding windows need positive finite T, width and step");
    if (width > T * (1.0 + 1e-9)) throw std::invalid_argument("window width exceeds the recording span");

    const double slack = 1e-9 * std::max(1.0, T);
    WindowFamily family;
    for (std::size_t i = 0;; ++i) {
        const double a = static_cast<double>(i) * step;
        const double b = a + width;
        if (b > T + slack) break;
        family.windows.emplace_back(a, std::min(b, T));
    }
    return family;
}

BhSelection bh_select(std::span<const double> pvalues, double q)
{
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("BH level q must lie in (0, 0.5)");
    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    BhSelection sel;
    for (std::size_t l = sorted.size(); l >= 1; --l) {
        if (sorted[l - 1] <= static_cast<double>(l) * q / m) {
            sel.k = l;
            sel.threshold = sorted[l - 1];
            break;
        }
    }
    return sel;
}

DetectionSet select_detections(std::vector<WindowPValues> windows, double q, PValuePool pool)
{
    std::vector<double> pooled;
    pooled.reserve(2 * windows.size());
    for (const auto& w : windows) {
        pooled.push_back(w.p_plus);
        if (pool == PValuePool::BothSides) pooled.push_back(w.p_minus);
    }

    DetectionSet set;
    set.q = q;
    set.pool = pool;
    const auto sel = bh_select(pooled, q);
    set.k = sel.k;
    set.threshold = sel.threshold;
    if (sel.k > 0) {
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const auto& w = windows[i];
            const bool plus = w.p_plus <= sel.threshold;
            const bool minus = pool == PValuePool::BothSides && w.p_minus <= sel.threshold;
            if (plus && (!minus || w.p_plus <= w.p_minus))
                set.detections.push_back({w.window, i, +1, w.p_plus});
            else if (minus)
                set.detections.push_back({w.window, i, -1, w.p_minus});
        }
    }
    set.windows = std::move(windows);
    return set;
}

std::vector<WindowPValues> permutation_window_pvalues(const TrialSample& sample, const WindowFamily& family,
                                                      double delta, std::size_t B, std::uint64_t seed)
{
    if (sample.size() < 2) throw std::invalid_argument("permutation UE needs n >= 2 trials");
    if (B < 2) throw std::invalid_argument("permutation UE needs B >= 2");
    const auto kind = CoincidenceKind::delayed(delta);

    std::vector<WindowPValues> out(family.size(), WindowPValues{Window(0.0, 1.0)});
    const auto K = static_cast<std::ptrdiff_t>(family.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t w = 0; w < K; ++w) {
        const auto idx = static_cast<std::size_t>(w);
        const Window& window = family.windows[idx];
        const auto m = build_matrix(sample, window, kind);
        WindowPValues pv{window};
        if (!m.all_zero()) {
            const auto reps = replicate_C(m, ResampleScheme::Permutation, B, derive_seed(seed, idx));
            const auto p = permutation_pvalues(reps.c, total_count(m));
            pv.p_plus = p.upper;
            pv.p_minus = p.lower;
        }
        out[idx] = pv;
    }
    return out;
}

DetectionSet permutation_ue(const TrialSample& sample, const WindowFamily& family, const UeOptions& options)
{
    if (family.size() == 0) throw std::invalid_argument("window family is empty");
    auto pvals = permutation_window_pvalues(sample, family, options.delta, options.B, options.seed);
    auto set = select_detections(std::move(pvals), options.q, options.pool);
    set.B = options.B;
    set.seed = options.seed;
    set.delta = options.delta;
    return set;
}

nlohmann::json to_json(const DetectionSet& set)
{
    nlohmann::json j;
    j["q"] = set.q;
    j["B"] = set.B;
    j["seed"] = set.seed;
    j["delta"] = set.delta;
    j["pool"] = set.pool == PValuePool::BothSides ? "both" : "upper";
    auto& windows = j["windows"] = nlohmann::json::array();
    for (const auto& w : set.windows)
        windows.push_back({{"a", w.window.a()}, {"b", w.window.b()}, {"p_plus", w.p_plus}, {"p_minus", w.p_minus}});
    j["k"] = set.k;
    j["threshold"] = set.threshold;
    auto& det = j["detections"] = nlohmann::json::array();
    for (const auto& d : set.detections)
        det.push_back({{"a", d.window.a()}, {"b", d.window.b()}, {"epsilon", d.epsilon}, {"p", d.p}});
    return j;
}

std::string to_csv(const DetectionSet& set)
{
    std::vector<int> eps(set.windows.size(), 0);
    for (const auto& d : set.detections) eps[d.index] = d.epsilon;

    std::ostringstream out;
    out << "a,b,p_plus,p_minus,detected,epsilon\n";
    for (std::size_t i = 0; i < set.windows.size(); ++i) {
        const auto& w = set.windows[i];
        out << format_real(w.window.a()) << ',' << format_real(w.window.b()) << ',' << format_real(w.p_plus) << ','
            << format_real(w.p_minus) << ','
            << (eps[i] != 0 ? 1 : 0) << ',' << eps[i] << '\n';
    }
    return out.str();
}

} // namespace ue
