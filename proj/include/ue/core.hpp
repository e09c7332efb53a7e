#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ue {

/// Sorted spike times (seconds) of one neuron on one trial.
///
/// Times are finite, non-negative and strictly increasing. Construction
/// validates; the object is immutable afterwards.
class SpikeTrain {
  public:
    SpikeTrain() = default;
    explicit SpikeTrain(std::vector<double> times);

    /// Sorts first, then validates (duplicates are still rejected).
    static SpikeTrain from_unsorted(std::vector<double> times);

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    double operator[](std::size_t i) const { return times_[i]; }

    operator std::span<const double>() const noexcept { return times_; }

    friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

  private:
    std::vector<double> times_;
};

struct TrialPair {
    SpikeTrain x1;
    SpikeTrain x2;

    friend bool operator==(const TrialPair&, const TrialPair&) = default;
};

/// Closed analysis window [a, b].
class Window {
  public:
    Window(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }

    bool contains(double t) const noexcept { return a_ <= t && t <= b_; }
    /// Closed-interval intersection: touching endpoints intersect.
    bool intersects(const Window& other) const noexcept
    {
        return a_ <= other.b_ && other.a_ <= b_;
    }

    friend bool operator==(const Window&, const Window&) = default;

  private:
    double a_;
    double b_;
};

/// n independent trials recorded on [0, T].
class TrialSample {
  public:
    TrialSample(std::vector<TrialPair> trials, double span_end);

    std::span<const TrialPair> trials() const noexcept { return trials_; }
    const TrialPair& operator[](std::size_t i) const { return trials_[i]; }
    std::size_t size() const noexcept { return trials_.size(); }
    double span_end() const noexcept { return span_end_; }
    Window span() const { return Window(0.0, span_end_); }

    friend bool operator==(const TrialSample&, const TrialSample&) = default;

  private:
    std::vector<TrialPair> trials_;
    double span_end_;
};

/// Points of `times` inside the closed window, as a view into `times`.
std::span<const double> restrict_view(std::span<const double> times, const Window& w);

SpikeTrain restrict(const SpikeTrain& train, const Window& w);

/// Error raised while reading a spike data file. `line()` is 1-based, 0 when
/// the problem is not tied to a particular line.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Reads the text spike format:
///
///     # comment
///     T=2.0
///     n=50            (optional: declares trailing empty trials)
///     <trial> <neuron 1|2> <time>
///
/// Records may come in any order; trains are sorted on ingest.
TrialSample parse_spike_file(std::istream& in);
TrialSample parse_spike_text(std::string_view text);

/// Shortest decimal text that reads back as the same double.
std::string format_real(double v);

/// Writes the same format with round-trip precision.
void write_spike_file(std::ostream& out, const TrialSample& sample);
std::string to_spike_text(const TrialSample& sample);

} // namespace ue
