#include "ue/core.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ue {

namespace {

// Returns the index of the first offending element, or times.size() if valid.
std::size_t first_invalid(const std::vector<double>& times)
{
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) return i;
        if (i > 0 && !(times[i - 1] < times[i])) return i;
    }
    return times.size();
}

} // namespace

SpikeTrain::SpikeTrain(std::vector<double> times) : times_(std::move(times))
{
    const auto bad = first_invalid(times_);
    if (bad != times_.size()) {
        std::ostringstream msg;
        msg << "invalid spike train at index " << bad << " (time " << times_[bad]
            << "): times must be finite, non-negative and strictly increasing";
        throw std::invalid_argument(msg.str());
    }
}

SpikeTrain SpikeTrain::from_unsorted(std::vector<double> times)
{
    std::sort(times.begin(), times.end());
    return SpikeTrain(std::move(times));
}

Window::Window(double a, double b) : a_(a), b_(b)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        std::ostringstream msg;
        msg << "invalid window [" << a << ", " << b << "]: need finite a < b";
        throw std::invalid_argument(msg.str());
    }
}

TrialSample::TrialSample(std::vector<TrialPair> trials, double span_end)
    : trials_(std::move(trials)), span_end_(span_end)
{
    if (trials_.empty()) throw std::invalid_argument("trial sample must contain at least one trial");
    if (!std::isfinite(span_end_) || !(span_end_ > 0.0))
        throw std::invalid_argument("recording span end T must be finite and positive");
    for (std::size_t i = 0; i < trials_.size(); ++i) {
        for (const SpikeTrain* train : {&trials_[i].x1, &trials_[i].x2}) {
            if (!train->empty() && train->times().back() > span_end_) {
                std::ostringstream msg;
                msg << "trial " << i + 1 << ": spike at " << train->times().back()
                    << " lies beyond T=" << span_end_;
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

std::span<const double> restrict_view(std::span<const double> times, const Window& w)
{
    auto first = std::lower_bound(times.begin(), times.end(), w.a());
    auto last = std::upper_bound(first, times.end(), w.b());
    return {first, last};
}

SpikeTrain restrict(const SpikeTrain& train, const Window& w)
{
    auto view = restrict_view(train.times(), w);
    return SpikeTrain(std::vector<double>(view.begin(), view.end()));
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n\f\v";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view token, T& out)
{
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_header(std::string_view line, std::string_view key, std::string_view& value)
{
    if (line.substr(0, key.size()) != key) return false;
    auto rest = trim(line.substr(key.size()));
    if (rest.empty() || rest.front() != '=') return false;
    value = trim(rest.substr(1));
    return true;
}

} // namespace

TrialSample parse_spike_file(std::istream& in)
{
    double span_end = 0.0;
    bool have_span = false;
    std::size_t declared_trials = 0;
    bool headers_open = true;

    // trial index -> the two neurons' raw times, with the line each time came from
    struct RawTrain {
        std::vector<std::pair<double, std::size_t>> times;
    };
    std::map<long long, std::array<RawTrain, 2>> raw;

    std::string buffer;
    std::size_t line_no = 0;
    while (std::getline(in, buffer)) {
        ++line_no;
        std::string_view line = buffer;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::string_view value;
        if (!have_span) {
            if (!parse_header(line, "T", value) || !parse_number(value, span_end) ||
                !std::isfinite(span_end) || !(span_end > 0.0))
                throw ParseError(line_no, "expected header `T=<positive float>`");
            have_span = true;
            continue;
        }
        if (headers_open && parse_header(line, "n", value)) {
            long long n = 0;
            if (!parse_number(value, n) || n < 1)
                throw ParseError(line_no, "expected header `n=<positive int>`");
            declared_trials = static_cast<std::size_t>(n);
            headers_open = false;
            continue;
        }
        headers_open = false;

        const auto fields = split_ws(line);
        if (fields.size() != 3)
            throw ParseError(line_no, "expected `<trial> <neuron> <time>`, got " +
                                          std::to_string(fields.size()) + " fields");
        long long trial = 0;
        long long neuron = 0;
        double time = 0.0;
        if (!parse_number(fields[0], trial) || trial < 1)
            throw ParseError(line_no, "trial index must be a positive integer");
        if (!parse_number(fields[1], neuron))
            throw ParseError(line_no, "neuron id must be an integer");
        if (neuron != 1 && neuron != 2) throw ParseError(line_no, "neuron id must be 1 or 2");
        if (!parse_number(fields[2], time) || !std::isfinite(time))
            throw ParseError(line_no, "spike time must be a finite number");
        if (time < 0.0) throw ParseError(line_no, "negative spike time");
        if (time > span_end) throw ParseError(line_no, "spike time exceeds declared T");
        if (declared_trials > 0 && static_cast<std::size_t>(trial) > declared_trials)
            throw ParseError(line_no, "trial index exceeds declared n");

        raw[trial][neuron - 1].times.emplace_back(time, line_no);
    }

    if (!have_span) throw ParseError(0, "missing `T=<float>` header");
    if (raw.empty() && declared_trials == 0) throw ParseError(0, "no spike records and no `n=` header");

    const std::size_t n_trials =
        std::max<std::size_t>(declared_trials, raw.empty() ? 0 : static_cast<std::size_t>(raw.rbegin()->first));

    std::vector<TrialPair> trials(n_trials);
    for (auto& [trial, neurons] : raw) {
        std::array<SpikeTrain, 2> built;
        for (int k = 0; k < 2; ++k) {
            auto& entries = neurons[k].times;
            std::sort(entries.begin(), entries.end());
            std::vector<double> times;
            times.reserve(entries.size());
            for (std::size_t e = 0; e < entries.size(); ++e) {
                if (e > 0 && entries[e].first == entries[e - 1].first)
                    throw ParseError(std::max(entries[e].second, entries[e - 1].second),
                                     "duplicate timestamp in trial " + std::to_string(trial) + ", neuron " +
                                         std::to_string(k + 1));
                times.push_back(entries[e].first);
            }
            built[k] = SpikeTrain(std::move(times));
        }
        trials[static_cast<std::size_t>(trial - 1)] = TrialPair{std::move(built[0]), std::move(built[1])};
    }
    return TrialSample(std::move(trials), span_end);
}

TrialSample parse_spike_text(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_spike_file(in);
}

std::string format_real(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

void write_spike_file(std::ostream& out, const TrialSample& sample)
{
    const auto fmt = format_real;
    out << "T=" << fmt(sample.span_end()) << '\n';
    out << "n=" << sample.size() << '\n';
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (int k = 0; k < 2; ++k) {
            const SpikeTrain& train = k == 0 ? sample[i].x1 : sample[i].x2;
            for (double t : train.times()) out << i + 1 << ' ' << k + 1 << ' ' << fmt(t) << '\n';
        }
    }
}

std::string to_spike_text(const TrialSample& sample)
{
    std::ostringstream out;
    write_spike_file(out, sample);
    return out.str();
}

} // namespace ue
