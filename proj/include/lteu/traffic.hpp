#pragma once

#include "lteu/errors.hpp"
#include "lteu/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace lteu {

inline constexpr std::int64_t kBitsPerMByte = 8'000'000;

inline std::int64_t mbytes_to_bits(double mbytes)
{
    return std::llround(mbytes * static_cast<double>(kBitsPerMByte));
}

/// One FTP Model 1 file transfer.
struct FileJob
{
    int ue_id = 0;
    double arrival_time = 0.0; // s
    std::int64_t size = 4'000'000; // bits
    std::int64_t remaining = 4'000'000;
    std::int64_t served = 0;
    std::optional<double> completion_time;

    bool done() const noexcept { return completion_time.has_value(); }
};

struct Arrival
{
    double time = 0.0; // s
    int ue_id = 0;
};

/// Poisson file arrivals over [0, duration) for a population of n_ues UEs.
/// Each arrival picks its UE uniformly. Times are strictly increasing; an exact
/// duplicate is pushed one tick later.
inline std::vector<Arrival> poisson_arrivals(double lambda, double duration, std::size_t n_ues, RngStream& rng,
                                             double tick = 1.0e-3)
{
    if (lambda < 0.0) {
        throw DomainError("arrival rate must be >= 0");
    }
    if (duration < 0.0) {
        throw DomainError("duration must be >= 0");
    }
    std::vector<Arrival> out;
    if (lambda == 0.0 || n_ues == 0) {
        return out;
    }
    double t = 0.0;
    for (;;) {
        t += rng.exponential(lambda);
        if (t >= duration) {
            break;
        }
        if (!out.empty() && t <= out.back().time) {
            t = out.back().time + tick;
            if (t >= duration) {
                break;
            }
        }
        out.push_back({t, static_cast<int>(rng.index_below(n_ues))});
    }
    return out;
}

} // namespace lteu
