#pragma once

#include "lteu/errors.hpp"
#include "lteu/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lteu {

inline constexpr double kOfficeLength = 120.0; // m, along x
inline constexpr double kOfficeWidth = 50.0;   // m, along y
inline constexpr int kUeCarrierCapability = 3;

struct Point2D
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

enum class BandClass
{
    licensed,
    unlicensed
};

enum class SiteKind
{
    macro,
    small
};

using CarrierId = int;
using NodeId = int;

struct CarrierSpec
{
    CarrierId id = 0;
    double center_freq_ghz = 0.0;
    double bandwidth_mhz = 0.0;
    BandClass band_class = BandClass::licensed;
    double tx_power_dbm = 24.0;
    SiteKind site_kind = SiteKind::small;

    friend bool operator==(const CarrierSpec&, const CarrierSpec&) = default;
};

struct NodeSite
{
    NodeId id = 0;
    Point2D position;
    std::vector<CarrierId> carrier_ids;

    bool carries(CarrierId c) const
    {
        return std::find(carrier_ids.begin(), carrier_ids.end(), c) != carrier_ids.end();
    }

    friend bool operator==(const NodeSite&, const NodeSite&) = default;
};

struct DeploymentLayout
{
    double width = kOfficeLength;
    double height = kOfficeWidth;
    std::vector<NodeSite> nodes;
    std::vector<CarrierSpec> carriers;
    std::string ratio_label;

    const CarrierSpec& carrier(CarrierId id) const
    {
        for (const auto& c : carriers) {
            if (c.id == id) {
                return c;
            }
        }
        throw ConfigError("carrier " + std::to_string(id) + " is not part of the layout");
    }

    bool contains(Point2D p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }

    std::size_t count_nodes(BandClass band) const
    {
        return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [&](const NodeSite& n) {
            return std::any_of(n.carrier_ids.begin(), n.carrier_ids.end(),
                               [&](CarrierId c) { return carrier(c).band_class == band; });
        }));
    }

    friend bool operator==(const DeploymentLayout&, const DeploymentLayout&) = default;
};

enum class OperationMode
{
    CA,
    DC,
    SA
};

struct UeTerminal
{
    int id = 0;
    Point2D position;
    int capability = kUeCarrierCapability;
    OperationMode mode = OperationMode::CA;
    std::vector<CarrierId> assigned_carriers;
};

enum class ThroughputCase
{
    CA_only,
    DC_SA
};

enum class AllocationPolicy
{
    fixed,
    flexible
};

inline std::string to_string(ThroughputCase c) { return c == ThroughputCase::CA_only ? "ca" : "dcsa"; }
inline std::string to_string(AllocationPolicy p) { return p == AllocationPolicy::fixed ? "fixed" : "flexible"; }

/// How Case-2 UEs pick their mode under fixed allocation.
enum class FixedModeSelection
{
    per_arrival, // estimate-driven choice at each service start
    at_start     // one mode per UE, fixed at initialization
};

/// Run configuration. Defaults reproduce the published scenario parameters.
struct SimConfig
{
    // scenario
    std::string ratio = "4:4";
    int ue_per_node = 20;
    // run
    std::uint64_t seed = 1;
    int seeds = 1;
    // channel
    double shadowing_sigma_db = 3.0;
    bool penetration = false;
    // radio
    double tx_power_dbm = 24.0;
    double noise_figure_db = 9.0;
    double se_cap = 6.0;
    double se_floor_db = -10.0;
    // traffic
    double lambda = 2.5;       // files/s offered to the whole small-cell system
    double lambda_scale = 1.0; // multiplies lambda (e.g. node count for a per-node reading)
    double file_size_mbytes = 0.5;
    // engine
    double tti_ms = 1.0;
    double duration_s = 100.0;
    // policy
    FixedModeSelection fixed_mode = FixedModeSelection::at_start;
    // experiments
    int coverage_samples = 10000;
    std::vector<std::string> coverage_ratios{"4:4", "4:8", "4:16"};
    std::vector<ThroughputCase> cases{ThroughputCase::CA_only, ThroughputCase::DC_SA};
    std::vector<AllocationPolicy> policies{AllocationPolicy::fixed, AllocationPolicy::flexible};
    std::vector<double> loads{2.5, 10.0};

    std::vector<std::uint64_t> seed_list() const
    {
        std::vector<std::uint64_t> out;
        for (int i = 0; i < seeds; ++i) {
            out.push_back(seed + static_cast<std::uint64_t>(i));
        }
        return out;
    }

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Carriers used by the coverage comparison: one licensed 2.6 GHz carrier and
/// one unlicensed 5.8 GHz carrier, both on small cells at the same power.
inline std::vector<CarrierSpec> coverage_carriers(double tx_power_dbm = 24.0)
{
    return {
        {1, 2.6, 20.0, BandClass::licensed, tx_power_dbm, SiteKind::small},
        {2, 5.8, 20.0, BandClass::unlicensed, tx_power_dbm, SiteKind::small},
    };
}

namespace detail {

inline std::vector<CarrierId> small_cell_carriers(std::span<const CarrierSpec> carriers, BandClass band)
{
    std::vector<CarrierId> ids;
    for (const auto& c : carriers) {
        if (c.site_kind == SiteKind::small && c.band_class == band) {
            ids.push_back(c.id);
        }
    }
    return ids;
}

inline std::vector<Point2D> row_positions(int per_row, double x0, double dx, std::initializer_list<double> ys)
{
    std::vector<Point2D> out;
    for (double y : ys) {
        for (int k = 0; k < per_row; ++k) {
            out.push_back({x0 + dx * k, y});
        }
    }
    return out;
}

} // namespace detail

/// Canonical small-cell layout for a licensed:unlicensed node ratio.
///
/// Four licensed sites sit on the long-axis centerline at x = 15 + 30k. In
/// "4:4" each of them also carries the unlicensed carriers (co-located). In
/// "4:8" and "4:16" the unlicensed carriers move to dedicated nodes laid out in
/// two rows at y = 12.5 and y = 37.5 (4 or 8 per row), so the number of nodes
/// carrying each band matches the label. Node ids are 0-based: centerline sites
/// first, then the lower row, then the upper row, x ascending.
inline DeploymentLayout build_layout(std::string_view ratio_label, std::span<const CarrierSpec> carriers)
{
    const auto licensed = detail::small_cell_carriers(carriers, BandClass::licensed);
    const auto unlicensed = detail::small_cell_carriers(carriers, BandClass::unlicensed);

    DeploymentLayout layout;
    layout.ratio_label = std::string(ratio_label);
    layout.carriers.assign(carriers.begin(), carriers.end());

    const auto centerline = detail::row_positions(4, 15.0, 30.0, {25.0});
    std::vector<Point2D> unlicensed_sites;
    if (ratio_label == "4:4") {
        // co-located
    } else if (ratio_label == "4:8") {
        unlicensed_sites = detail::row_positions(4, 15.0, 30.0, {12.5, 37.5});
    } else if (ratio_label == "4:16") {
        unlicensed_sites = detail::row_positions(8, 7.5, 15.0, {12.5, 37.5});
    } else {
        throw ConfigError("unknown layout ratio '" + std::string(ratio_label) + "' (expected 4:4, 4:8 or 4:16)");
    }

    NodeId next = 0;
    for (const auto& p : centerline) {
        NodeSite site{next++, p, licensed};
        if (unlicensed_sites.empty()) {
            site.carrier_ids.insert(site.carrier_ids.end(), unlicensed.begin(), unlicensed.end());
        }
        layout.nodes.push_back(std::move(site));
    }
    for (const auto& p : unlicensed_sites) {
        layout.nodes.push_back({next++, p, unlicensed});
    }
    return layout;
}

inline DeploymentLayout build_layout(std::string_view ratio_label)
{
    const auto carriers = coverage_carriers();
    return build_layout(ratio_label, carriers);
}

/// Drops n_per_node UEs per small-cell node, i.i.d. uniform over the open
/// office rectangle.
inline std::vector<UeTerminal> drop_ues(const DeploymentLayout& layout, int n_per_node, RngStream& rng)
{
    if (n_per_node < 0) {
        throw DomainError("n_per_node must be >= 0");
    }
    const std::size_t total = layout.nodes.size() * static_cast<std::size_t>(n_per_node);
    std::vector<UeTerminal> ues;
    ues.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        UeTerminal ue;
        ue.id = static_cast<int>(i);
        ue.position.x = rng.uniform_open(0.0, layout.width);
        ue.position.y = rng.uniform_open(0.0, layout.height);
        ues.push_back(ue);
    }
    return ues;
}

} // namespace lteu
