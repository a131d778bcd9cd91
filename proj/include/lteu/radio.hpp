#pragma once

#include "lteu/channel.hpp"
#include "lteu/errors.hpp"
#include "lteu/rng.hpp"
#include "lteu/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace lteu {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Received power in dBm with 0 dBi antennas.
inline double received_power(double tx_power_dbm, const LinkLoss& loss)
{
    return tx_power_dbm - loss.total();
}

/// Thermal noise power in dBm over the given bandwidth.
inline double noise_power(double bandwidth_mhz, double noise_figure_db)
{
    if (!(bandwidth_mhz > 0.0)) {
        throw DomainError("bandwidth must be positive");
    }
    return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1.0e6) + noise_figure_db;
}

/// Interference-as-noise SINR in dB. All powers in dBm.
inline double sinr(double serving_dbm, std::span<const double> interferers_dbm, double noise_dbm)
{
    double denom = db_to_linear(noise_dbm);
    for (double i : interferers_dbm) {
        denom += db_to_linear(i);
    }
    return linear_to_db(db_to_linear(serving_dbm) / denom);
}

/// Truncated Shannon mapping from SINR to spectral efficiency.
struct LinkAbstraction
{
    double sinr_floor_db = -10.0;
    double se_cap = 6.0; // bit/s/Hz

    double spectral_efficiency(double sinr_db) const
    {
        if (sinr_db < sinr_floor_db) {
            return 0.0;
        }
        return std::min(std::log2(1.0 + db_to_linear(sinr_db)), se_cap);
    }
};

inline double spectral_efficiency(double sinr_db)
{
    return LinkAbstraction{}.spectral_efficiency(sinr_db);
}

struct ChannelParams
{
    double shadowing_sigma_db = 3.0;
    bool penetration = false;
};

/// Received power for every (UE, node, carrier) triple, with shadowing and
/// penetration drawn once per (UE, node, frequency) and then held fixed.
///
/// Entries for nodes that do not carry a carrier are -infinity.
class LinkBudgetTable
{
  public:
    LinkBudgetTable() = default;

    LinkBudgetTable(const DeploymentLayout& layout, std::span<const Point2D> ues, const ChannelParams& params,
                    std::uint64_t seed)
        : n_ue_(ues.size()), n_node_(layout.nodes.size()), carrier_ids_(carrier_ids_of(layout)),
          rx_(n_ue_ * n_node_ * carrier_ids_.size(), -std::numeric_limits<double>::infinity())
    {
        for (std::size_t u = 0; u < n_ue_; ++u) {
            RngStream shadow(seed, "link/shadow", u);
            RngStream depth(seed, "link/penetration", u);
            for (std::size_t n = 0; n < n_node_; ++n) {
                const auto& node = layout.nodes[n];
                const double d = std::hypot(ues[u].x - node.position.x, ues[u].y - node.position.y);
                // one draw per distinct frequency on this node, in carrier order
                std::vector<std::pair<double, LinkLoss>> per_freq;
                for (CarrierId cid : node.carrier_ids) {
                    const auto& c = layout.carrier(cid);
                    auto it = std::find_if(per_freq.begin(), per_freq.end(),
                                           [&](const auto& f) { return f.first == c.center_freq_ghz; });
                    if (it == per_freq.end()) {
                        LinkLoss loss;
                        loss.pathloss = inh_los_pathloss(d, c.center_freq_ghz);
                        loss.shadowing = shadow_sample(params.shadowing_sigma_db, shadow);
                        if (params.penetration) {
                            loss.penetration = penetration_loss(penetration_band_for(c.center_freq_ghz),
                                                                sample_penetration_depth(d, depth));
                        }
                        per_freq.emplace_back(c.center_freq_ghz, loss);
                        it = std::prev(per_freq.end());
                    }
                    at(u, n, slot(cid)) = received_power(c.tx_power_dbm, it->second);
                }
            }
        }
    }

    /// Table with explicit values, indexed [ue][node][carrier slot].
    static LinkBudgetTable from_values(std::size_t n_ue, std::size_t n_node, std::vector<CarrierId> carrier_ids,
                                       std::vector<double> rx_dbm)
    {
        LinkBudgetTable t;
        t.n_ue_ = n_ue;
        t.n_node_ = n_node;
        t.carrier_ids_ = std::move(carrier_ids);
        if (rx_dbm.size() != n_ue * n_node * t.carrier_ids_.size()) {
            throw DomainError("link table size mismatch");
        }
        t.rx_ = std::move(rx_dbm);
        return t;
    }

    double rx_dbm(std::size_t ue, NodeId node, CarrierId carrier) const
    {
        return rx_[index(ue, static_cast<std::size_t>(node), slot(carrier))];
    }

    std::size_t ue_count() const noexcept { return n_ue_; }
    std::size_t node_count() const noexcept { return n_node_; }

  private:
    static std::vector<CarrierId> carrier_ids_of(const DeploymentLayout& layout)
    {
        std::vector<CarrierId> ids;
        for (const auto& c : layout.carriers) {
            ids.push_back(c.id);
        }
        return ids;
    }

    std::size_t slot(CarrierId id) const
    {
        for (std::size_t i = 0; i < carrier_ids_.size(); ++i) {
            if (carrier_ids_[i] == id) {
                return i;
            }
        }
        throw ConfigError("carrier " + std::to_string(id) + " has no link budget");
    }

    std::size_t index(std::size_t ue, std::size_t node, std::size_t slot) const
    {
        return (ue * n_node_ + node) * carrier_ids_.size() + slot;
    }

    double& at(std::size_t ue, std::size_t node, std::size_t slot) { return rx_[index(ue, node, slot)]; }

    std::size_t n_ue_ = 0;
    std::size_t n_node_ = 0;
    std::vector<CarrierId> carrier_ids_;
    std::vector<double> rx_;
};

/// Serving node on a carrier: maximum received power, ties to the lowest node id.
/// `rx_dbm(node_id)` returns the received power from that node.
template <class RxPower>
NodeId associate(const DeploymentLayout& layout, CarrierId carrier, RxPower&& rx_dbm)
{
    NodeId best = -1;
    double best_rx = -std::numeric_limits<double>::infinity();
    for (const auto& node : layout.nodes) {
        if (!node.carries(carrier)) {
            continue;
        }
        const double rx = rx_dbm(node.id);
        if (best < 0 || rx > best_rx || (rx == best_rx && node.id < best)) {
            best = node.id;
            best_rx = rx;
        }
    }
    if (best < 0) {
        throw ConfigError("no node carries carrier " + std::to_string(carrier));
    }
    return best;
}

inline NodeId associate(const DeploymentLayout& layout, CarrierId carrier, const LinkBudgetTable& links,
                        std::size_t ue)
{
    return associate(layout, carrier, [&](NodeId n) { return links.rx_dbm(ue, n, carrier); });
}

} // namespace lteu
