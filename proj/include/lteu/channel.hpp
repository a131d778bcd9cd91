#pragma once

#include "lteu/errors.hpp"
#include "lteu/rng.hpp"

#include <algorithm>
#include <cmath>

namespace lteu {

inline constexpr double kSpeedOfLight = 3.0e8; // m/s

/// Per-link losses in dB. Penetration is 0 when disabled.
struct LinkLoss
{
    double pathloss = 0.0;
    double shadowing = 0.0;
    double penetration = 0.0;

    double total() const noexcept { return pathloss + shadowing + penetration; }
};

/// Indoor hotspot line-of-sight path loss in dB; d in meters, fc in GHz.
/// Distances below 1 m are evaluated at 1 m.
inline double inh_los_pathloss(double d, double fc_ghz)
{
    if (!(fc_ghz > 0.0)) {
        throw DomainError("carrier frequency must be positive");
    }
    d = std::max(d, 1.0);
    return 16.9 * std::log10(d) + 32.8 + 20.0 * std::log10(fc_ghz);
}

/// Breakpoint distance of the dual-slope UMi LoS model, using effective
/// antenna heights h' = h - 1 m.
inline double umi_breakpoint_distance(double fc_ghz, double h_bs, double h_ut)
{
    if (!(h_bs > 1.0) || !(h_ut > 1.0)) {
        throw DomainError("antenna heights must exceed 1 m (effective height h - 1 must be positive)");
    }
    return 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * fc_ghz * 1.0e9 / kSpeedOfLight;
}

/// Urban micro line-of-sight path loss in dB. Two slopes split at the breakpoint
/// distance; the slopes do not meet exactly there.
inline double umi_los_pathloss(double d, double fc_ghz, double h_bs, double h_ut)
{
    if (!(fc_ghz > 0.0)) {
        throw DomainError("carrier frequency must be positive");
    }
    const double d_bp = umi_breakpoint_distance(fc_ghz, h_bs, h_ut);
    d = std::max(d, 1.0);
    if (d < d_bp) {
        return 22.0 * std::log10(d) + 28.0 + 20.0 * std::log10(fc_ghz);
    }
    return 40.0 * std::log10(d) + 7.8 - 18.0 * std::log10(h_bs - 1.0) - 18.0 * std::log10(h_ut - 1.0) +
           2.0 * std::log10(fc_ghz);
}

enum class PenetrationBand
{
    ghz2,
    ghz3_5,
    ghz5
};

/// Nearest tabulated penetration band for a carrier frequency.
inline PenetrationBand penetration_band_for(double fc_ghz)
{
    if (fc_ghz < 2.75) {
        return PenetrationBand::ghz2;
    }
    if (fc_ghz < 4.25) {
        return PenetrationBand::ghz3_5;
    }
    return PenetrationBand::ghz5;
}

inline double penetration_base_db(PenetrationBand band)
{
    switch (band) {
    case PenetrationBand::ghz2:
        return 20.0;
    case PenetrationBand::ghz3_5:
        return 23.0;
    case PenetrationBand::ghz5:
        return 27.0;
    }
    return 0.0;
}

/// Indoor penetration loss for an indoor depth d_m in [0, 25] m.
inline double penetration_loss(PenetrationBand band, double d_m)
{
    if (!(d_m >= 0.0 && d_m <= 25.0)) {
        throw DomainError("penetration depth must lie in [0, 25] m");
    }
    return penetration_base_db(band) + 0.5 * d_m;
}

/// Indoor depth for one link, uniform on [0, min(25, link distance)].
inline double sample_penetration_depth(double link_distance, RngStream& rng)
{
    return rng.uniform(0.0, std::clamp(link_distance, 0.0, 25.0));
}

/// One lognormal shadowing draw in dB.
inline double shadow_sample(double sigma_db, RngStream& rng)
{
    if (sigma_db < 0.0) {
        throw DomainError("shadowing sigma must be >= 0");
    }
    return rng.normal(0.0, sigma_db);
}

} // namespace lteu
