// ue: command line front end.
//
//   ue simulate   --config sim.json [--seed S] [--out spikes.txt]
//   ue test       --input spikes.txt --window A B [--method P] [--delta D] [--B N] [--seed S]
//   ue ue         --input spikes.txt [--window W] [--step S] [--q Q] [--B N] [--format json|csv]
//   ue experiment --config sim.json [--method P --method TSC ...] [--runs R]
//   ue pvals      --config sim.json --window A B [--reps R] [--method ...]
//   ue bench      [--rate1 50] [--rate2 50] [--width 0.1] [--delta 0.005] [--reps 10000]
//
// Results go to standard output (or --out), progress to standard error.
// Exit status: 0 on success, 2 on bad input, 1 on anything else.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ue/harness.hpp"

namespace {

constexpr int input_error = 2;

struct Common {
    double delta = 0.01;
    std::size_t B = 10000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string format = "json";
    std::string out;
};

ue::TrialSample read_spikes(const std::string& path)
{
    if (path == "-") return ue::parse_spike_file(std::cin);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spike file `" + path + "`");
    return ue::parse_spike_file(in);
}

void emit(const Common& c, const std::string& text)
{
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw std::invalid_argument("cannot write `" + c.out + "`");
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

ue::Window window_arg(const std::vector<double>& ab)
{
    if (ab.size() != 2) throw std::invalid_argument("--window needs two numbers A B");
    return ue::Window(ab[0], ab[1]);
}

std::string report_csv(const ue::TestReport& r)
{
    std::ostringstream s;
    s << "method,statistic,p_upper,p_lower,B,seed,degenerate\n"
      << ue::to_string(r.method) << ',' << ue::format_real(r.statistic) << ',' << ue::format_real(r.p_upper) << ',';
    if (r.p_lower) s << ue::format_real(*r.p_lower);
    s << ',' << r.B << ',' << r.seed << ',' << (r.degenerate ? 1 : 0) << '\n';
    return s.str();
}

std::string rates_csv(const std::vector<ue::MultiMethod>& methods, const std::vector<ue::RateEstimates>& rates)
{
    std::ostringstream s;
    s << "method,fdr,fndr,runs,mean_rejections\n";
    for (std::size_t k = 0; k < methods.size(); ++k)
        s << ue::to_string(methods[k]) << ',' << ue::format_real(rates[k].fdr) << ',' << ue::format_real(rates[k].fndr)
          << ',' << rates[k].runs << ',' << ue::format_real(rates[k].mean_rejections) << '\n';
    return s.str();
}

void add_common(CLI::App* cmd, Common& c, bool with_delta = true, bool with_B = true)
{
    if (with_delta)
        cmd->add_option("--delta", c.delta, "coincidence delay in seconds")->capture_default_str()->check(
            CLI::PositiveNumber);
    if (with_B) cmd->add_option("--B", c.B, "Monte Carlo replicates")->capture_default_str()->check(CLI::Range(2, 1 << 30));
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    cmd->add_option("--out", c.out, "output file (default: stdout)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Unitary Events analysis of paired spike trains"};
    app.require_subcommand(1);
    Common c;

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a sample from a JSON config and write a spike file");
    std::string sim_config;
    sim->add_option("--config", sim_config, "simulation config (JSON)")->required();
    add_common(sim, c, false, false);

    // test
    auto* test = app.add_subcommand("test", "single-window independence test");
    std::string input;
    std::vector<double> test_window;
    std::string test_method = "P";
    test->add_option("--input", input, "spike file ('-' for stdin)")->required();
    test->add_option("--window", test_window, "window bounds A B (seconds)")->expected(2)->required();
    test->add_option("--method", test_method, "N, TSC, TSU, FBU or P")->capture_default_str();
    bool binned = false;
    test->add_flag("--binned", binned, "use the binned coincidence count instead of the delayed one");
    add_common(test, c);

    // ue
    auto* uecmd = app.add_subcommand("ue", "permutation UE over sliding windows with BH selection");
    double width = 0.1, step = 0.01, q = 0.05;
    bool upper_only = false;
    uecmd->add_option("--input", input, "spike file ('-' for stdin)")->required();
    uecmd->add_option("--window", width, "window width (seconds)")->capture_default_str()->check(CLI::PositiveNumber);
    uecmd->add_option("--step", step, "window step (seconds)")->capture_default_str()->check(CLI::PositiveNumber);
    uecmd->add_option("--q", q, "target FDR level in (0, 0.5)")->capture_default_str();
    uecmd->add_flag("--upper-only", upper_only, "run BH on the p+ values only");
    add_common(uecmd, c);

    // experiment
    auto* exp = app.add_subcommand("experiment", "estimate FDR and FNDR over repeated simulations");
    std::string exp_config;
    std::vector<std::string> exp_methods;
    std::size_t runs = 1000;
    exp->add_option("--config", exp_config, "simulation config (JSON)")->required();
    exp->add_option("--method", exp_methods, "P, TSC or TSC+BH (repeatable; default P)");
    exp->add_option("--runs", runs, "number of simulated samples")->capture_default_str();
    exp->add_option("--window", width, "window width (seconds)")->capture_default_str()->check(CLI::PositiveNumber);
    exp->add_option("--step", step, "window step (seconds)")->capture_default_str()->check(CLI::PositiveNumber);
    exp->add_option("--q", q, "target FDR level in (0, 0.5)")->capture_default_str();
    add_common(exp, c);

    // pvals
    auto* pv = app.add_subcommand("pvals", "p-values of single-window tests over repeated simulations (CSV by default)");
    std::string pv_config;
    std::vector<std::string> pv_methods;
    std::vector<double> pv_window;
    std::size_t reps = 1000;
    pv->add_option("--config", pv_config, "simulation config (JSON)")->required();
    pv->add_option("--window", pv_window, "window bounds A B (default: [0, T])")->expected(2);
    pv->add_option("--method", pv_methods, "N, TSC, TSU, FBU, P (repeatable; default all)");
    pv->add_option("--reps", reps, "number of simulated samples")->capture_default_str();
    add_common(pv, c);

    // bench
    auto* bench = app.add_subcommand("bench", "mean operation counts of the binned and delayed kernels");
    double rate1 = 50, rate2 = 50, bench_width = 0.1;
    std::size_t bench_reps = 10000;
    bench->add_option("--rate1", rate1, "rate of neuron 1 (Hz)")->capture_default_str()->check(CLI::NonNegativeNumber);
    bench->add_option("--rate2", rate2, "rate of neuron 2 (Hz)")->capture_default_str()->check(CLI::NonNegativeNumber);
    bench->add_option("--width", bench_width, "window length (seconds)")->capture_default_str()->check(
        CLI::PositiveNumber);
    bench->add_option("--reps", bench_reps, "number of train pairs")->capture_default_str();
    double bench_delta = 0.005;
    bench->add_option("--delta", bench_delta, "coincidence delay / bin width (seconds)")->capture_default_str()->check(
        CLI::PositiveNumber);
    add_common(bench, c, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : input_error;
    }

    try {
        if (c.threads > 0) omp_set_num_threads(c.threads);

        if (*sim) {
            auto config = ue::load_simulation_config(sim_config);
            const std::uint64_t seed = sim->count("--seed") > 0 ? c.seed : config.seed;
            std::cerr << "simulating " << config.n << " trials on [0, " << config.T << "]\n";
            emit(c, ue::to_spike_text(ue::simulate_sample(config, seed)));
        } else if (*test) {
            const auto sample = read_spikes(input);
            const auto w = window_arg(test_window);
            const auto kind = binned ? ue::CoincidenceKind::binned(c.delta) : ue::CoincidenceKind::delayed(c.delta);
            if (sample.size() < 2) throw std::invalid_argument("the test needs at least two trials");
            const auto method = ue::parse_test_method(test_method);
            if (method == ue::TestMethod::Naive && sample.size() < 3)
                throw std::invalid_argument("the naive test needs at least three trials");
            const auto m = ue::build_matrix(sample, w, kind);
            const auto r = ue::run_test(m, method, c.B, c.seed);
            emit(c, c.format == "csv" ? report_csv(r) : ue::to_json(r).dump(2));
        } else if (*uecmd) {
            if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("--q must lie in (0, 0.5)");
            const auto sample = read_spikes(input);
            const auto family = ue::sliding_windows(sample.span_end(), width, step);
            std::cerr << "testing " << family.size() << " windows, " << sample.size() << " trials, B = " << c.B << '\n';
            ue::UeOptions opt;
            opt.delta = c.delta;
            opt.q = q;
            opt.B = c.B;
            opt.seed = c.seed;
            opt.pool = upper_only ? ue::PValuePool::UpperOnly : ue::PValuePool::BothSides;
            const auto set = ue::permutation_ue(sample, family, opt);
            std::cerr << set.detections.size() << " detection(s)\n";
            emit(c, c.format == "csv" ? ue::to_csv(set) : ue::to_json(set).dump(2));
        } else if (*exp) {
            const auto config = ue::load_simulation_config(exp_config);
            if (exp_methods.empty()) exp_methods = {"P"};
            std::vector<ue::MultiMethod> methods;
            for (const auto& name : exp_methods) methods.push_back(ue::parse_multi_method(name));
            const auto family = ue::sliding_windows(config.T, width, step);
            std::cerr << runs << " runs, " << family.size() << " windows, " << methods.size() << " method(s)\n";
            ue::ExperimentOptions opt;
            opt.delta = c.delta;
            opt.q = q;
            opt.B = c.B;
            opt.seed = c.seed;
            opt.runs = runs;
            const auto rates = ue::estimate_rates(config, family, methods, opt);
            if (c.format == "csv") {
                emit(c, rates_csv(methods, rates));
            } else {
                nlohmann::json j = nlohmann::json::object();
                for (std::size_t k = 0; k < methods.size(); ++k)
                    j[std::string(ue::to_string(methods[k]))] = ue::to_json(rates[k]);
                emit(c, j.dump(2));
            }
        } else if (*pv) {
            const auto config = ue::load_simulation_config(pv_config);
            const auto w = pv_window.empty() ? ue::Window(0.0, config.T) : window_arg(pv_window);
            std::vector<ue::TestMethod> methods;
            if (pv_methods.empty())
                methods = {ue::TestMethod::Naive, ue::TestMethod::TSC, ue::TestMethod::TSU, ue::TestMethod::FBU,
                           ue::TestMethod::Permutation};
            for (const auto& name : pv_methods) methods.push_back(ue::parse_test_method(name));
            if (config.n < 3) throw std::invalid_argument("the p-value study needs at least three trials");
            std::cerr << reps << " samples, " << methods.size() << " method(s)\n";
            const auto rows = ue::pvalue_cdf_study(config, w, c.delta, reps, methods, c.B, c.seed);
            if (pv->count("--format") > 0 && c.format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& r : rows) j.push_back({{"rep", r.rep}, {"method", ue::to_string(r.method)}, {"p", r.p}});
                emit(c, j.dump(2));
            } else {
                emit(c, ue::to_csv(rows));
            }
        } else if (*bench) {
            const auto s = ue::bench_operation_counts(rate1, rate2, bench_width, bench_delta, bench_reps, c.seed);
            if (c.format == "csv") {
                std::ostringstream o;
                o << "mean_delayed_ops,mean_binned_ops,delayed_bound,binned_reference,reps\n"
                  << ue::format_real(s.mean_delayed_ops) << ',' << ue::format_real(s.mean_binned_ops) << ','
                  << ue::format_real(s.delayed_bound) << ',' << ue::format_real(s.binned_reference) << ',' << s.reps
                  << '\n';
                emit(c, o.str());
            } else {
                emit(c, ue::to_json(s).dump(2));
            }
        }
    } catch (const ue::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
