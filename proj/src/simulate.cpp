#include "ue/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ue {

namespace {

void check_breakpoints(const std::vector<double>& bp, std::size_t pieces, const char* what)
{
    if (bp.size() < 2 || bp.size() != pieces + 1)
        throw std::invalid_argument(std::string(what) + ": need k+1 breakpoints for k >= 1 pieces");
    for (std::size_t i = 0; i < bp.size(); ++i) {
        if (!std::isfinite(bp[i])) throw std::invalid_argument(std::string(what) + ": non-finite breakpoint");
        if (i > 0 && !(bp[i - 1] < bp[i]))
            throw std::invalid_argument(std::string(what) + ": breakpoints must be strictly increasing");
    }
}

std::size_t piece_of(std::span<const double> bp, double t)
{
    // last k with bp[k] <= t
    auto it = std::upper_bound(bp.begin(), bp.end(), t);
    return static_cast<std::size_t>(it - bp.begin()) - 1;
}

} // namespace

PiecewiseRate::PiecewiseRate(std::vector<double> breakpoints, std::vector<double> rates)
    : breakpoints_(std::move(breakpoints)), rates_(std::move(rates))
{
    check_breakpoints(breakpoints_, rates_.size(), "piecewise rate");
    for (double r : rates_)
        if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("piecewise rate: rates must be finite and >= 0");
}

PiecewiseRate PiecewiseRate::constant(double rate, const Window& span)
{
    return PiecewiseRate({span.a(), span.b()}, {rate});
}

double PiecewiseRate::at(double t) const noexcept
{
    if (t < start() || t > end()) return 0.0;
    const auto k = std::min(piece_of(breakpoints_, t), rates_.size() - 1);
    return rates_[k];
}

double PiecewiseRate::integral() const noexcept
{
    double s = 0.0;
    for (std::size_t k = 0; k < rates_.size(); ++k) s += rates_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
    return s;
}

StepKernel::StepKernel(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
    check_breakpoints(breakpoints_, values_.size(), "step kernel");
    if (breakpoints_.front() != 0.0) throw std::invalid_argument("step kernel: first breakpoint must be 0");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("step kernel: values must be finite");
}

double StepKernel::at(double lag) const noexcept
{
    if (values_.empty() || lag < 0.0 || lag >= breakpoints_.back()) return 0.0;
    return values_[piece_of(breakpoints_, lag)];
}

double StepKernel::positive_integral() const noexcept
{
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        s += std::max(values_[k], 0.0) * (breakpoints_[k + 1] - breakpoints_[k]);
    return s;
}

double StepKernel::positive_sup_from(double lag) const noexcept
{
    double sup = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (breakpoints_[k + 1] > lag) sup = std::max(sup, values_[k]);
    return sup;
}

HawkesSpec::HawkesSpec(std::array<double, 2> spontaneous, std::array<std::array<StepKernel, 2>, 2> kernels,
                       Window span)
    : spontaneous_(spontaneous), kernels_(std::move(kernels)), span_(span)
{
    for (double mu : spontaneous_)
        if (!std::isfinite(mu) || mu < 0.0)
            throw std::invalid_argument("hawkes: spontaneous rates must be finite and >= 0");
    const double rho = branching_ratio();
    if (!(rho < 1.0)) {
        std::ostringstream msg;
        msg << "hawkes: unstable interaction (spectral radius of positive kernel integrals " << rho << " >= 1)";
        throw std::invalid_argument(msg.str());
    }
}

double HawkesSpec::branching_ratio() const noexcept
{
    // g[to][from]
    const double g11 = kernels_[0][0].positive_integral();
    const double g22 = kernels_[1][1].positive_integral();
    const double g12 = kernels_[1][0].positive_integral();
    const double g21 = kernels_[0][1].positive_integral();
    const double tr = g11 + g22;
    const double det = g11 * g22 - g12 * g21;
    const double disc = std::max(tr * tr - 4.0 * det, 0.0);
    return 0.5 * (tr + std::sqrt(disc));
}

double HawkesSpec::max_support() const noexcept
{
    double s = 0.0;
    for (const auto& row : kernels_)
        for (const auto& k : row) s = std::max(s, k.support());
    return s;
}

SpikeTrain gen_poisson(const PoissonSpec& spec, Rng& rng)
{
    const auto bp = spec.rate.breakpoints();
    const auto rates = spec.rate.rates();
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(spec.rate.integral() * 1.2) + 8);
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (rates[k] <= 0.0) continue;
        double t = bp[k];
        while (true) {
            t += rng.exponential(rates[k]);
            if (t >= bp[k + 1]) break;
            if (times.empty() || times.back() < t) times.push_back(t);
        }
    }
    return SpikeTrain(std::move(times));
}

SpikeTrain merge(const SpikeTrain& a, const SpikeTrain& b)
{
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.times().begin(), a.times().end(), b.times().begin(), b.times().end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return SpikeTrain(std::move(out));
}

TrialPair gen_injection(const InjectionSpec& spec, Rng& rng)
{
    const std::uint64_t key = rng();
    Rng r1(key, 0), r2(key, 1), rinj(key, 2);
    const auto n1 = gen_poisson(spec.base1, r1);
    const auto n2 = gen_poisson(spec.base2, r2);
    const auto inj = gen_poisson(spec.inject, rinj);
    return {merge(n1, inj), merge(n2, inj)};
}

TrialPair gen_hawkes(const HawkesSpec& spec, Rng& rng)
{
    struct Event {
        double t;
        int proc;
    };
    std::vector<Event> history;
    std::size_t live = 0; // first event whose kernels may still be active
    const double horizon = spec.max_support();
    const double end = spec.span().b();
    std::array<std::vector<double>, 2> out;

    auto intensity = [&](int to, double t) {
        double lam = spec.spontaneous()[to];
        for (std::size_t e = live; e < history.size(); ++e)
            lam += spec.kernel(history[e].proc, to).at(t - history[e].t);
        return std::max(lam, 0.0);
    };

    double t = spec.span().a();
    while (true) {
        while (live < history.size() && t - history[live].t >= horizon) ++live;

        // Dominates both intensities on [t, next event): each past event's
        // contribution is bounded by its kernel's positive sup over older lags.
        double bound = 0.0;
        for (int to = 0; to < 2; ++to) {
            double b = spec.spontaneous()[to];
            for (std::size_t e = live; e < history.size(); ++e)
                b += spec.kernel(history[e].proc, to).positive_sup_from(t - history[e].t);
            bound += b;
        }
        if (!(bound > 0.0)) break;

        t += rng.exponential(bound);
        if (t > end) break;

        const double lam1 = intensity(0, t);
        const double lam2 = intensity(1, t);
        const double u = rng.uniform() * bound;
        int proc = -1;
        if (u < lam1)
            proc = 0;
        else if (u < lam1 + lam2)
            proc = 1;
        if (proc < 0) continue;
        auto& times = out[static_cast<std::size_t>(proc)];
        if (!times.empty() && !(times.back() < t)) continue;
        times.push_back(t);
        history.push_back({t, proc});
    }
    return {SpikeTrain(std::move(out[0])), SpikeTrain(std::move(out[1]))};
}

// --- configs ----------------------------------------------------------------

namespace {

using nlohmann::json;

PoissonSpec rate_from_json(const json& j, const Window& span, const char* field)
{
    if (j.is_number()) return {PiecewiseRate::constant(j.get<double>(), span)};
    if (j.is_object()) {
        auto bp = j.at("breakpoints").get<std::vector<double>>();
        auto rates = j.at("rates").get<std::vector<double>>();
        PiecewiseRate rate(std::move(bp), std::move(rates));
        if (std::abs(rate.start() - span.a()) > 1e-12 || std::abs(rate.end() - span.b()) > 1e-12)
            throw std::invalid_argument(std::string(field) + ": rate breakpoints must span the segment");
        return {std::move(rate)};
    }
    throw std::invalid_argument(std::string(field) + ": rate must be a number or {breakpoints, rates}");
}

StepKernel kernel_from_json(const json& j)
{
    return StepKernel(j.at("breakpoints").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
}

Segment segment_from_json(const json& j, double T)
{
    const std::string type = j.at("type").get<std::string>();
    const Window span(j.value("start", 0.0), j.value("end", T));
    if (span.a() < 0.0 || span.b() > T + 1e-12) throw std::invalid_argument("segment must lie within [0, T]");

    if (type == "poisson") {
        return {span, PoissonPairSegment{rate_from_json(j.at("rate1"), span, "rate1"),
                                         rate_from_json(j.at("rate2"), span, "rate2")}};
    }
    if (type == "injection") {
        return {span, InjectionSpec{rate_from_json(j.at("base1"), span, "base1"),
                                    rate_from_json(j.at("base2"), span, "base2"),
                                    rate_from_json(j.at("inject"), span, "inject")}};
    }
    if (type == "hawkes") {
        const auto mu = j.at("spontaneous").get<std::vector<double>>();
        if (mu.size() != 2) throw std::invalid_argument("hawkes: spontaneous must list two rates");
        std::array<std::array<StepKernel, 2>, 2> kernels;
        if (j.contains("kernels")) {
            for (const auto& [name, kj] : j.at("kernels").items()) {
                int from = 0, to = 0;
                if (name == "1->1") from = 0, to = 0;
                else if (name == "1->2") from = 0, to = 1;
                else if (name == "2->1") from = 1, to = 0;
                else if (name == "2->2") from = 1, to = 1;
                else throw std::invalid_argument("hawkes: unknown kernel `" + name + "`");
                kernels[from][to] = kernel_from_json(kj);
            }
        }
        return {span, HawkesSpec({mu[0], mu[1]}, std::move(kernels), span)};
    }
    throw std::invalid_argument("unknown segment type `" + type + "`");
}

} // namespace

SimulationConfig parse_simulation_config(const nlohmann::json& j)
{
    try {
        SimulationConfig c;
        c.T = j.at("T").get<double>();
        if (!(c.T > 0.0) || !std::isfinite(c.T)) throw std::invalid_argument("T must be positive");
        const auto n = j.at("n").get<long long>();
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        c.n = static_cast<std::size_t>(n);
        c.seed = j.value("seed", std::uint64_t{0});
        for (const auto& sj : j.at("segments")) c.segments.push_back(segment_from_json(sj, c.T));
        for (std::size_t s = 1; s < c.segments.size(); ++s)
            if (c.segments[s].span.a() < c.segments[s - 1].span.b())
                throw std::invalid_argument("segments must be sorted and non-overlapping");
        if (j.contains("dependence")) {
            for (const auto& dj : j.at("dependence")) {
                const int sign = dj.value("sign", 1);
                if (sign != 1 && sign != -1) throw std::invalid_argument("dependence sign must be +1 or -1");
                c.dependence.push_back({Window(dj.at("a").get<double>(), dj.at("b").get<double>()), sign});
            }
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("simulation config: ") + e.what());
    }
}

SimulationConfig load_simulation_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open simulation config `" + path + "`");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("simulation config `" + path + "`: " + e.what());
    }
    return parse_simulation_config(j);
}

TrialPair simulate_trial(const SimulationConfig& config, Rng& rng)
{
    const std::uint64_t key = rng();
    std::vector<double> x1, x2;
    for (std::size_t s = 0; s < config.segments.size(); ++s) {
        Rng seg_rng(key, s);
        const Segment& seg = config.segments[s];
        TrialPair part = std::visit(
            [&](const auto& proc) -> TrialPair {
                using P = std::decay_t<decltype(proc)>;
                if constexpr (std::is_same_v<P, PoissonPairSegment>) {
                    const std::uint64_t k2 = seg_rng();
                    Rng r1(k2, 0), r2(k2, 1);
                    return {gen_poisson(proc.x1, r1), gen_poisson(proc.x2, r2)};
                } else if constexpr (std::is_same_v<P, InjectionSpec>) {
                    return gen_injection(proc, seg_rng);
                } else {
                    return gen_hawkes(proc, seg_rng);
                }
            },
            seg.process);
        auto append = [](std::vector<double>& dst, const SpikeTrain& src) {
            for (double t : src.times())
                if (dst.empty() || dst.back() < t) dst.push_back(t);
        };
        append(x1, part.x1);
        append(x2, part.x2);
    }
    return {SpikeTrain(std::move(x1)), SpikeTrain(std::move(x2))};
}

TrialSample simulate_sample(const SimulationConfig& config, std::uint64_t seed)
{
    std::vector<TrialPair> trials(config.n);
    const auto n = static_cast<std::ptrdiff_t>(config.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        trials[static_cast<std::size_t>(i)] = simulate_trial(config, rng);
    }
    return TrialSample(std::move(trials), config.T);
}

} // namespace ue
