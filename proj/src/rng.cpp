#include "ue/rng.hpp"

#include <cmath>

namespace ue {

Rng::Rng(std::uint64_t seed) noexcept
{
    std::uint64_t state = seed;
    for (auto& word : s_) {
        state += 0x9e3779b97f4a7c15ull;
        word = mix64(state);
    }
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept
{
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<u128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Rng::exponential(double rate) noexcept
{
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log(1.0 - uniform()) / rate;
}

} // namespace ue
