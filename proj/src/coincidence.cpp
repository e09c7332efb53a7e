#include "ue/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ue {

namespace {

void require_positive_delta(double delta)
{
    if (!std::isfinite(delta) || !(delta > 0.0)) throw std::invalid_argument("delta must be finite and > 0");
}

} // namespace

CoincidenceKind CoincidenceKind::delayed(double delta)
{
    require_positive_delta(delta);
    return {Type::Delayed, delta};
}

CoincidenceKind CoincidenceKind::binned(double delta)
{
    require_positive_delta(delta);
    return {Type::Binned, delta};
}

std::uint64_t delayed_count(std::span<const double> x1, std::span<const double> x2, double delta,
                            OpCounter* counter)
{
    const std::size_t n2 = x2.size();
    std::uint64_t c = 0;
    std::uint64_t ops = 0;
    std::uint64_t cmps = 0;
    std::size_t j = 0;

    for (double u : x1) {
        const double low = u - delta; // step 1
        ++ops;
        while (j < n2 && x2[j] < low) { // step 2
            ++j;
            ++ops;
            ++cmps;
        }
        ++cmps;
        ++ops; // step 3
        if (j == n2) break;
        const double up = u + delta; // step 4.a
        ++ops;
        std::size_t k = j;
        while (k < n2 && x2[k] <= up) { // step 4.b
            ++c;
            ++k;
            ops += 2;
            ++cmps;
        }
        ++cmps;
    }

    if (counter) {
        counter->total += ops;
        counter->comparisons += cmps;
    }
    return c;
}

std::size_t bin_count(const Window& w, double delta)
{
    require_positive_delta(delta);
    const double ratio = w.length() / delta;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 2.0) {
        std::ostringstream msg;
        msg << "binned count needs (b - a) / delta to be an integer >= 2, got " << ratio;
        throw std::invalid_argument(msg.str());
    }
    return static_cast<std::size_t>(rounded);
}

std::uint64_t binned_count(std::span<const double> x1, std::span<const double> x2, const Window& w, double delta,
                           OpCounter* counter)
{
    const std::size_t m = bin_count(w, delta);
    auto bin_of = [&](double t) {
        auto idx = static_cast<std::size_t>(std::floor((t - w.a()) / delta));
        return idx >= m ? m - 1 : idx;
    };

    // Binning preprocessing is not charged to the counter.
    std::vector<unsigned char> hit1(m, 0), hit2(m, 0);
    for (double t : x1) hit1[bin_of(t)] = 1;
    for (double t : x2) hit2[bin_of(t)] = 1;

    std::uint64_t c = 0;
    for (std::size_t l = 0; l < m; ++l) c += hit1[l] & hit2[l];

    if (counter) {
        counter->total += 2 * m;
        counter->comparisons += m;
    }
    return c;
}

std::uint64_t count(const CoincidenceKind& kind, std::span<const double> x1, std::span<const double> x2,
                    const Window& w, OpCounter* counter)
{
    switch (kind.type) {
    case CoincidenceKind::Type::Delayed:
        return delayed_count(x1, x2, kind.delta, counter);
    case CoincidenceKind::Type::Binned:
        return binned_count(x1, x2, w, kind.delta, counter);
    }
    throw std::logic_error("unknown coincidence kind");
}

} // namespace ue
