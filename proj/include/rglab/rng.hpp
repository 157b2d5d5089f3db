// Counter-based Philox4x32-10 streams and the few sampling helpers
// the generators need. Output depends only on (seed, stream id, draw index),
// so trial i is reproducible no matter which worker runs it.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rglab {

class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Block bijection(Block ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    // The 64-bit seed is the Philox key; the stream id occupies the upper
    // half of the counter, the draw index the lower half.
    constexpr Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        if (buffered_ == 0) {
            refill();
        }
        --buffered_;
        const std::size_t at = 2 * (1 - buffered_);
        return (std::uint64_t{block_[at]} << 32) | block_[at + 1];
    }

    std::uint64_t seed() const noexcept { return (std::uint64_t{key_[1]} << 32) | key_[0]; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    void refill() noexcept
    {
        block_ = bijection({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                           key_);
        ++counter_;
        buffered_ = 2;
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    Block block_{};
    std::size_t buffered_ = 0;
};

using Rng = Philox4x32;

// Stream id for sub-stream `lane` of trial `trial`. Lanes separate the
// independent pieces of one trial (e.g. the model graph and its ER reference).
constexpr std::uint64_t trial_stream(std::uint64_t trial, std::uint32_t lane = 0) noexcept
{
    return (trial << 8) | (lane & 0xFFu);
}

inline Rng trial_rng(std::uint64_t base_seed, std::uint64_t trial, std::uint32_t lane = 0) noexcept
{
    return Rng(base_seed, trial_stream(trial, lane));
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Gen>
double uniform01(Gen& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) (Lemire's multiply-and-reject); bound > 0.
template <class Gen>
std::uint64_t uniform_below(Gen& gen, std::uint64_t bound)
{
    unsigned __int128 m = static_cast<unsigned __int128>(gen()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(gen()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

template <class Gen>
bool bernoulli(Gen& gen, double p)
{
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01(gen) < p;
}

/// Number of failures before the first success of Bernoulli(p) trials,
/// p in (0, 1). Used to skip over absent items in sparse sampling.
template <class Gen>
std::uint64_t geometric_skip(Gen& gen, double log1m_p)
{
    const double u = 1.0 - uniform01(gen); // (0, 1]
    const double k = std::floor(std::log(u) / log1m_p);
    if (!(k < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(k);
}

/// Calls visit(index) for each index in [0, count) independently selected
/// with probability p, in increasing order.
template <class Gen, class Visit>
void for_each_bernoulli(Gen& gen, std::uint64_t count, double p, Visit&& visit)
{
    if (p <= 0.0 || count == 0) return;
    if (p >= 1.0) {
        for (std::uint64_t i = 0; i < count; ++i) visit(i);
        return;
    }
    const double log1m_p = std::log1p(-p);
    std::uint64_t i = 0;
    while (true) {
        const std::uint64_t skip = geometric_skip(gen, log1m_p);
        if (skip >= count - i) return;
        i += skip;
        visit(i);
        if (++i >= count) return;
    }
}

} // namespace rglab
