#include "ue/harness.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "ue/coincidence.hpp"
#include "ue/resampling.hpp"
#include "ue/statistics.hpp"

namespace ue {

std::vector<WindowTruth> ground_truth(const SimulationConfig& config, const WindowFamily& family)
{
    std::vector<WindowTruth> out(family.size());
    for (std::size_t w = 0; w < family.size(); ++w) {
        for (const auto& region : config.dependence) {
            if (!family.windows[w].intersects(region.window)) continue;
            if (region.sign > 0)
                out[w].positive = true;
            else
                out[w].negative = true;
        }
    }
    return out;
}

ConfusionCounts confusion(const std::vector<WindowTruth>& truth, const std::vector<bool>& rejected_plus,
                          const std::vector<bool>& rejected_minus)
{
    if (rejected_plus.size() != truth.size() || rejected_minus.size() != truth.size())
        throw std::invalid_argument("confusion: rejection vectors must match the window family");
    ConfusionCounts c;
    auto tally = [&](bool dependent, bool rejected) {
        ++c.m;
        if (!dependent) ++c.m0;
        if (rejected) {
            ++c.R;
            ++(dependent ? c.S : c.V);
        } else {
            ++(dependent ? c.T_acc : c.U);
        }
    };
    for (std::size_t w = 0; w < truth.size(); ++w) {
        tally(truth[w].positive, rejected_plus[w]);
        tally(truth[w].negative, rejected_minus[w]);
    }
    return c;
}

ConfusionCounts confusion(const std::vector<WindowTruth>& truth, const DetectionSet& detections)
{
    std::vector<bool> plus(truth.size(), false), minus(truth.size(), false);
    for (const auto& d : detections.detections) (d.epsilon > 0 ? plus : minus).at(d.index) = true;
    return confusion(truth, plus, minus);
}

std::string_view to_string(MultiMethod method)
{
    switch (method) {
    case MultiMethod::Permutation: return "P";
    case MultiMethod::TSC: return "TSC";
    case MultiMethod::TSC_BH: return "TSC+BH";
    }
    return "?";
}

MultiMethod parse_multi_method(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "P" || s == "PERMUTATION") return MultiMethod::Permutation;
    if (s == "TSC") return MultiMethod::TSC;
    if (s == "TSC+BH" || s == "TSC_BH" || s == "TSCBH") return MultiMethod::TSC_BH;
    throw std::invalid_argument("unknown experiment method `" + std::string(name) + "` (expected P, TSC or TSC+BH)");
}

namespace {

std::vector<WindowPValues> tsc_window_pvalues(const TrialSample& sample, const WindowFamily& family, double delta,
                                              std::size_t B, std::uint64_t seed)
{
    const auto kind = CoincidenceKind::delayed(delta);
    std::vector<WindowPValues> out(family.size(), WindowPValues{Window(0.0, 1.0)});
    const auto K = static_cast<std::ptrdiff_t>(family.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t w = 0; w < K; ++w) {
        const auto idx = static_cast<std::size_t>(w);
        const auto m = build_matrix(sample, family.windows[idx], kind);
        WindowPValues pv{family.windows[idx]};
        if (!m.all_zero()) {
            const auto reps = replicate_C(m, ResampleScheme::TrialShuffle, B, derive_seed(seed, idx));
            const auto p = counting_pvalues(reps.c, total_count(m));
            pv.p_plus = p.upper;
            pv.p_minus = p.lower;
        }
        out[idx] = pv;
    }
    return out;
}

RunRejections from_detections(const DetectionSet& set)
{
    RunRejections r{std::vector<bool>(set.windows.size(), false), std::vector<bool>(set.windows.size(), false)};
    for (const auto& d : set.detections) (d.epsilon > 0 ? r.plus : r.minus)[d.index] = true;
    return r;
}

} // namespace

RunRejections run_multi_method(const TrialSample& sample, const WindowFamily& family, MultiMethod method,
                               double delta, double q, std::size_t B, std::uint64_t seed)
{
    switch (method) {
    case MultiMethod::Permutation: {
        UeOptions opt;
        opt.delta = delta;
        opt.q = q;
        opt.B = B;
        opt.seed = seed;
        return from_detections(permutation_ue(sample, family, opt));
    }
    case MultiMethod::TSC: {
        const auto pv = tsc_window_pvalues(sample, family, delta, B, seed);
        RunRejections r{std::vector<bool>(pv.size()), std::vector<bool>(pv.size())};
        for (std::size_t w = 0; w < pv.size(); ++w) {
            r.plus[w] = pv[w].p_plus < tsc_uncorrected_level;
            r.minus[w] = pv[w].p_minus < tsc_uncorrected_level;
        }
        return r;
    }
    case MultiMethod::TSC_BH:
        return from_detections(
            select_detections(tsc_window_pvalues(sample, family, delta, B, seed), q, PValuePool::BothSides));
    }
    throw std::invalid_argument("unknown experiment method");
}

std::vector<RateEstimates> estimate_rates(const SimulationConfig& config, const WindowFamily& family,
                                          const std::vector<MultiMethod>& methods, const ExperimentOptions& options)
{
    if (!(options.q > 0.0 && options.q < 0.5)) throw std::invalid_argument("q must lie in (0, 0.5)");
    const auto truth = ground_truth(config, family);
    const std::size_t runs = options.runs;
    const std::size_t nm = methods.size();

    // per run, per method: (V/R 1{R>0}, T/(m-R) 1{m-R>0}, R)
    struct RunResult {
        double fdp = 0.0;
        double fndp = 0.0;
        double rejections = 0.0;
    };
    std::vector<RunResult> results(runs * nm);

    const auto total = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t rr = 0; rr < total; ++rr) {
        const auto r = static_cast<std::uint64_t>(rr);
        const auto sample = simulate_sample(config, derive_seed(options.seed, 2 * r));
        const std::uint64_t analysis_seed = derive_seed(options.seed, 2 * r + 1);
        for (std::size_t k = 0; k < nm; ++k) {
            const auto rej =
                run_multi_method(sample, family, methods[k], options.delta, options.q, options.B, analysis_seed);
            const auto c = confusion(truth, rej.plus, rej.minus);
            RunResult res;
            if (c.R > 0) res.fdp = static_cast<double>(c.V) / static_cast<double>(c.R);
            if (c.m > c.R) res.fndp = static_cast<double>(c.T_acc) / static_cast<double>(c.m - c.R);
            res.rejections = static_cast<double>(c.R);
            results[static_cast<std::size_t>(rr) * nm + k] = res;
        }
    }

    std::vector<RateEstimates> out(nm);
    for (std::size_t k = 0; k < nm; ++k) {
        out[k].runs = runs;
        if (runs == 0) continue;
        CompensatedSum fdr, fndr, rej;
        for (std::size_t r = 0; r < runs; ++r) {
            fdr.add(results[r * nm + k].fdp);
            fndr.add(results[r * nm + k].fndp);
            rej.add(results[r * nm + k].rejections);
        }
        out[k].fdr = fdr.value() / static_cast<double>(runs);
        out[k].fndr = fndr.value() / static_cast<double>(runs);
        out[k].mean_rejections = rej.value() / static_cast<double>(runs);
    }
    return out;
}

RateEstimates estimate_rates(const SimulationConfig& config, const WindowFamily& family, MultiMethod method,
                             const ExperimentOptions& options)
{
    return estimate_rates(config, family, std::vector<MultiMethod>{method}, options).front();
}

std::vector<PValueRecord> pvalue_cdf_study(const SimulationConfig& config, const Window& window, double delta,
                                           std::size_t reps, const std::vector<TestMethod>& methods, std::size_t B,
                                           std::uint64_t seed)
{
    const auto kind = CoincidenceKind::delayed(delta);
    const std::size_t nm = methods.size();
    std::vector<PValueRecord> out(reps * nm);
    const auto total = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t rr = 0; rr < total; ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        const auto sample = simulate_sample(config, derive_seed(seed, 2 * r));
        const auto m = build_matrix(sample, window, kind);
        const std::uint64_t analysis_seed = derive_seed(seed, 2 * r + 1);
        for (std::size_t k = 0; k < nm; ++k) {
            const auto report = run_test(m, methods[k], B, analysis_seed);
            out[r * nm + k] = {r, methods[k], report.p_upper};
        }
    }
    return out;
}

double empirical_cdf(const std::vector<PValueRecord>& records, TestMethod method, double alpha)
{
    std::size_t total = 0, hit = 0;
    for (const auto& rec : records) {
        if (rec.method != method) continue;
        ++total;
        hit += rec.p <= alpha;
    }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

std::string to_csv(const std::vector<PValueRecord>& records)
{
    std::ostringstream out;
    out << "rep,method,p\n";
    for (const auto& r : records) out << r.rep << ',' << to_string(r.method) << ',' << format_real(r.p) << '\n';
    return out.str();
}

OpCountSummary bench_operation_counts(double rate1, double rate2, double width, double delta, std::size_t reps,
                                      std::uint64_t seed)
{
    const Window w(0.0, width);
    const PoissonSpec p1{PiecewiseRate::constant(rate1, w)};
    const PoissonSpec p2{PiecewiseRate::constant(rate2, w)};
    OpCountSummary s;
    s.reps = reps;
    s.delayed_bound = 3.0 * rate1 * width + rate2 * width + 4.0 * delta * rate1 * rate2 * width;
    s.binned_reference = 2.0 * width / delta;
    if (reps == 0) return s;

    OpCounter delayed, binned;
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng1(seed, 2 * r), rng2(seed, 2 * r + 1);
        const auto x1 = gen_poisson(p1, rng1);
        const auto x2 = gen_poisson(p2, rng2);
        delayed_count(x1, x2, delta, &delayed);
        binned_count(x1, x2, w, delta, &binned);
    }
    s.mean_delayed_ops = static_cast<double>(delayed.total) / static_cast<double>(reps);
    s.mean_binned_ops = static_cast<double>(binned.total) / static_cast<double>(reps);
    return s;
}

nlohmann::json to_json(const TestReport& report)
{
    nlohmann::json j;
    j["method"] = to_string(report.method);
    j["statistic"] = report.statistic;
    j["p_upper"] = report.p_upper;
    j["p_lower"] = report.p_lower ? nlohmann::json(*report.p_lower) : nlohmann::json(nullptr);
    j["B"] = report.B;
    j["seed"] = report.seed;
    j["degenerate"] = report.degenerate;
    return j;
}

nlohmann::json to_json(const RateEstimates& rates)
{
    return {{"fdr", rates.fdr}, {"fndr", rates.fndr}, {"runs", rates.runs}, {"mean_rejections", rates.mean_rejections}};
}

nlohmann::json to_json(const OpCountSummary& s)
{
    return {{"mean_delayed_ops", s.mean_delayed_ops},
            {"mean_binned_ops", s.mean_binned_ops},
            {"delayed_bound", s.delayed_bound},
            {"binned_reference", s.binned_reference},
            {"reps", s.reps}};
}

} // namespace ue
