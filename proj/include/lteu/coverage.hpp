#pragma once

#include "lteu/errors.hpp"
#include "lteu/metrics.hpp"
#include "lteu/radio.hpp"
#include "lteu/rng.hpp"
#include "lteu/scenario.hpp"

#include <string>
#include <vector>

namespace lteu {

inline constexpr double kHeadlinePercentile = 0.5;
inline constexpr double kTailPercentile = 0.05;

/// Serving received power and full-load geometry SINR over the test points
/// for one (ratio, band) pair.
struct CoverageCurves
{
    std::string ratio;
    double band_ghz = 0.0;
    CdfCurve rsrp_dbm;
    CdfCurve sinr_db;
};

struct CoverageGap
{
    std::string ratio;
    double percentile = 0.0;
    double gap_db = 0.0;
};

struct CoverageResult
{
    std::vector<CoverageCurves> curves; // ratio-major, licensed band first
    std::vector<CoverageGap> gaps;

    const CoverageCurves& find(const std::string& ratio, BandClass band) const
    {
        for (const auto& c : curves) {
            if (c.ratio == ratio && (band == BandClass::licensed) == (c.band_ghz < 5.0)) {
                return c;
            }
        }
        throw DomainError("no coverage curve for " + ratio);
    }
};

/// Raw per-point samples for one (ratio, band), before sorting into a CDF.
struct CoverageSamples
{
    std::vector<double> rsrp_dbm;
    std::vector<double> sinr_db;
};

/// Coverage samples for one layout over a fixed set of test points. Every node
/// transmits; penetration is not applied.
inline std::vector<CoverageSamples> coverage_samples(const DeploymentLayout& layout, std::span<const Point2D> points,
                                                     double shadowing_sigma_db, double noise_figure_db,
                                                     std::uint64_t seed)
{
    const LinkBudgetTable links(layout, points, {shadowing_sigma_db, false}, seed);
    std::vector<CoverageSamples> out(layout.carriers.size());
    std::vector<double> interferers;
    for (std::size_t b = 0; b < layout.carriers.size(); ++b) {
        const auto& carrier = layout.carriers[b];
        const double noise = noise_power(carrier.bandwidth_mhz, noise_figure_db);
        out[b].rsrp_dbm.reserve(points.size());
        out[b].sinr_db.reserve(points.size());
        for (std::size_t p = 0; p < points.size(); ++p) {
            const NodeId serving = associate(layout, carrier.id, links, p);
            interferers.clear();
            for (const auto& node : layout.nodes) {
                if (node.id != serving && node.carries(carrier.id)) {
                    interferers.push_back(links.rx_dbm(p, node.id, carrier.id));
                }
            }
            const double rx = links.rx_dbm(p, serving, carrier.id);
            out[b].rsrp_dbm.push_back(rx);
            out[b].sinr_db.push_back(sinr(rx, interferers, noise));
        }
    }
    return out;
}

/// Test points i.i.d. uniform over the office, shared by every ratio of a seed.
inline std::vector<Point2D> coverage_points(int n, std::uint64_t seed)
{
    if (n <= 0) {
        throw DomainError("coverage needs at least one test point");
    }
    RngStream rng(seed, "coverage/points");
    std::vector<Point2D> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
        p.x = rng.uniform_open(0.0, kOfficeLength);
        p.y = rng.uniform_open(0.0, kOfficeWidth);
    }
    return pts;
}

/// Licensed vs unlicensed coverage for each ratio, pooling the samples of all
/// given seeds into one curve per (ratio, band).
inline CoverageResult run_coverage(const SimConfig& cfg, std::span<const std::string> ratios,
                                   std::span<const std::uint64_t> seeds)
{
    if (seeds.empty()) {
        throw DomainError("coverage needs at least one seed");
    }
    const auto carriers = coverage_carriers(cfg.tx_power_dbm);
    CoverageResult result;
    for (const auto& ratio : ratios) {
        const auto layout = build_layout(ratio, carriers);
        std::vector<CoverageSamples> pooled(carriers.size());
        for (auto seed : seeds) {
            const auto points = coverage_points(cfg.coverage_samples, seed);
            const auto samples =
                coverage_samples(layout, points, cfg.shadowing_sigma_db, cfg.noise_figure_db, mix64(seed ^ fnv1a(ratio)));
            for (std::size_t b = 0; b < samples.size(); ++b) {
                pooled[b].rsrp_dbm.insert(pooled[b].rsrp_dbm.end(), samples[b].rsrp_dbm.begin(),
                                          samples[b].rsrp_dbm.end());
                pooled[b].sinr_db.insert(pooled[b].sinr_db.end(), samples[b].sinr_db.begin(),
                                         samples[b].sinr_db.end());
            }
        }
        for (std::size_t b = 0; b < carriers.size(); ++b) {
            result.curves.push_back({ratio, carriers[b].center_freq_ghz, CdfCurve(std::move(pooled[b].rsrp_dbm)),
                                     CdfCurve(std::move(pooled[b].sinr_db))});
        }
        const auto& lic = result.curves[result.curves.size() - 2];
        const auto& unl = result.curves.back();
        for (double p : {kTailPercentile, kHeadlinePercentile}) {
            result.gaps.push_back({ratio, p, coverage_gap(lic.rsrp_dbm, unl.rsrp_dbm, p)});
        }
    }
    return result;
}

inline CoverageResult run_coverage(const SimConfig& cfg)
{
    const auto seeds = cfg.seed_list();
    return run_coverage(cfg, cfg.coverage_ratios, seeds);
}

} // namespace lteu
