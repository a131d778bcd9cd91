#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lteu {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// A named random substream.
///
/// The engine seed is derived from (run seed, stream name, index) only, so the
/// sequence a stream produces does not depend on how many draws other streams
/// have made or in which order streams were created.
class RngStream
{
  public:
    RngStream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0)
        : engine_(mix64(mix64(seed) ^ fnv1a(name)) ^ mix64(index + 0x632BE59BD9B4E019ULL))
    {
    }

    /// Uniform on the open interval (lo, hi).
    double uniform_open(double lo, double hi)
    {
        std::uniform_real_distribution<double> dist(lo, hi);
        double v = dist(engine_);
        while (v <= lo) {
            v = dist(engine_);
        }
        return v;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi)
    {
        if (!(hi > lo)) {
            return lo;
        }
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double normal(double mean, double sd)
    {
        if (sd <= 0.0) {
            return mean;
        }
        return std::normal_distribution<double>(mean, sd)(engine_);
    }

    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }

    /// Uniform integer in [0, n).
    std::size_t index_below(std::size_t n)
    {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
};

} // namespace lteu
