#pragma once

#include "lteu/errors.hpp"
#include "lteu/metrics.hpp"
#include "lteu/policy.hpp"
#include "lteu/radio.hpp"
#include "lteu/rng.hpp"
#include "lteu/scenario.hpp"
#include "lteu/traffic.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace lteu {

/// One carrier of an active job, served by one node.
struct Leg
{
    NodeId node = 0;
    CarrierId carrier = 0;
};

struct ActiveJob
{
    std::size_t job = 0; // index into the job ledger
    std::size_t ue = 0;
    std::vector<Leg> legs;
};

/// Bits granted to one active job in one TTI, split per leg.
struct JobGrant
{
    std::int64_t total = 0;
    std::vector<std::int64_t> per_leg;
    std::vector<double> share; // unrounded bandwidth * SE / n * TTI per leg
};

/// Active set of the TTI loop: which jobs are being served on which
/// (node, carrier) pairs, and how many jobs share each pair.
///
/// A node with no active job on a carrier is silent on it and does not
/// interfere.
class EngineState
{
  public:
    EngineState(const DeploymentLayout& layout, const LinkBudgetTable& links, double noise_figure_db, double tti_ms)
        : layout_(&layout), links_(&links), tti_ms_(tti_ms)
    {
        for (const auto& c : layout.carriers) {
            max_carrier_ = std::max(max_carrier_, c.id);
        }
        load_.assign(layout.nodes.size() * static_cast<std::size_t>(max_carrier_ + 1), 0);
        noise_dbm_.assign(static_cast<std::size_t>(max_carrier_ + 1), 0.0);
        bandwidth_mhz_.assign(static_cast<std::size_t>(max_carrier_ + 1), 0.0);
        for (const auto& c : layout.carriers) {
            noise_dbm_[static_cast<std::size_t>(c.id)] = noise_power(c.bandwidth_mhz, noise_figure_db);
            bandwidth_mhz_[static_cast<std::size_t>(c.id)] = c.bandwidth_mhz;
        }
    }

    const DeploymentLayout& layout() const noexcept { return *layout_; }
    const LinkBudgetTable& links() const noexcept { return *links_; }
    double tti_ms() const noexcept { return tti_ms_; }
    const std::vector<ActiveJob>& active() const noexcept { return active_; }

    int load(NodeId node, CarrierId carrier) const { return load_[slot(node, carrier)]; }

    double bandwidth_mhz(CarrierId c) const { return bandwidth_mhz_[static_cast<std::size_t>(c)]; }

    /// SINR of `ue` on `carrier` from `node`, with interference from every other
    /// node that currently has active jobs on that carrier.
    double leg_sinr_db(std::size_t ue, NodeId node, CarrierId carrier) const
    {
        double denom = db_to_linear(noise_dbm_[static_cast<std::size_t>(carrier)]);
        for (const auto& other : layout_->nodes) {
            if (other.id != node && load(other.id, carrier) > 0) {
                denom += db_to_linear(links_->rx_dbm(ue, other.id, carrier));
            }
        }
        return linear_to_db(db_to_linear(links_->rx_dbm(ue, node, carrier)) / denom);
    }

    void activate(ActiveJob job)
    {
        for (const auto& leg : job.legs) {
            ++load_[slot(leg.node, leg.carrier)];
        }
        active_.push_back(std::move(job));
    }

    /// Removes the active entry at `index` (order of the others is kept).
    void deactivate(std::size_t index)
    {
        for (const auto& leg : active_[index].legs) {
            --load_[slot(leg.node, leg.carrier)];
        }
        active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(index));
    }

  private:
    std::size_t slot(NodeId node, CarrierId carrier) const
    {
        return static_cast<std::size_t>(node) * static_cast<std::size_t>(max_carrier_ + 1) +
               static_cast<std::size_t>(carrier);
    }

    const DeploymentLayout* layout_;
    const LinkBudgetTable* links_;
    double tti_ms_;
    CarrierId max_carrier_ = 0;
    std::vector<int> load_;
    std::vector<double> noise_dbm_;
    std::vector<double> bandwidth_mhz_;
    std::vector<ActiveJob> active_;
};

/// Bits a (node, carrier) pair can deliver in one TTI at spectral efficiency `se`.
inline double tti_capacity_bits(double bandwidth_mhz, double se, double tti_ms)
{
    // MHz * ms = 1e3 bit per bit/s/Hz
    return bandwidth_mhz * se * tti_ms * 1.0e3;
}

/// Equal-share grants for one TTI. Each job gets bandwidth * SE / n on every
/// leg, where n is the number of active jobs on that (node, carrier), rounded
/// down to whole bits.
inline std::vector<JobGrant> schedule_tti(const EngineState& state, const LinkAbstraction& link)
{
    std::vector<JobGrant> grants;
    grants.reserve(state.active().size());
    for (const auto& job : state.active()) {
        JobGrant g;
        for (const auto& leg : job.legs) {
            const double se = link.spectral_efficiency(state.leg_sinr_db(job.ue, leg.node, leg.carrier));
            const double cap = tti_capacity_bits(state.bandwidth_mhz(leg.carrier), se, state.tti_ms());
            const double share = cap / state.load(leg.node, leg.carrier);
            const auto bits = static_cast<std::int64_t>(std::floor(share));
            g.share.push_back(share);
            g.per_leg.push_back(bits);
            g.total += bits;
        }
        grants.push_back(std::move(g));
    }
    return grants;
}

/// What one TTI delivered on one (node, carrier) pair.
struct CarrierTtiRecord
{
    NodeId node = 0;
    CarrierId carrier = 0;
    int jobs = 0;
    std::int64_t served_bits = 0;
    double capacity_bits = 0.0; // sum of the jobs' equal-time shares
    bool had_completion = false;
};

struct TtiRecord
{
    std::int64_t tti = 0;
    std::vector<CarrierTtiRecord> carriers;
};

/// One FTP run of the four-carrier small-cell system.
///
/// Every file is served FIFO per UE. When a file reaches the head of its UE's
/// queue the UE's mode and carriers are chosen against the active set at that
/// instant, and the file is then served on every small-cell carrier it holds
/// until done. The macro anchor carrier is held but never carries counted bits.
class ThroughputSimulation
{
  public:
    ThroughputSimulation(const SimConfig& cfg, ThroughputCase tcase, AllocationPolicy policy, double lambda,
                         std::uint64_t seed)
        : cfg_(cfg), case_(tcase), policy_(policy), lambda_(lambda), seed_(seed),
          layout_(build_layout(cfg.ratio, carrier_table(cfg.tx_power_dbm))),
          link_{cfg.se_floor_db, cfg.se_cap}
    {
        if (cfg.ratio != "4:4") {
            throw ConfigError("the throughput experiment requires the co-located 4:4 layout");
        }
        if (!(cfg.tti_ms > 0.0)) {
            throw ConfigError("engine.tti_ms must be positive");
        }
        RngStream drop(seed, "scenario/ue_drop");
        ues_ = drop_ues(layout_, cfg.ue_per_node, drop);
        std::vector<Point2D> positions;
        for (const auto& ue : ues_) {
            positions.push_back(ue.position);
        }
        links_ = LinkBudgetTable(layout_, positions, {cfg.shadowing_sigma_db, cfg.penetration}, seed);

        std::vector<int> ids;
        for (const auto& ue : ues_) {
            ids.push_back(ue.id);
        }
        const std::vector<CarrierId> unlicensed{kFirstUnlicensedCarrier, kSecondUnlicensedCarrier};
        const auto fixed = allocate_fixed(ids, unlicensed);
        contexts_.resize(ues_.size());
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            auto& ctx = contexts_[u];
            ctx.fixed_unlicensed = fixed.at(ues_[u].id);
            ctx.fixed_mode = kAllModes[u % kAllModes.size()];
            ctx.anchor = associate(layout_, kSmallLicensedCarrier, links_, u);
            for (const auto& c : layout_.carriers) {
                if (c.site_kind == SiteKind::small) {
                    ctx.serving[c.id] = associate(layout_, c.id, links_, u);
                }
            }
        }
    }

    /// Called once per simulated TTI with per-(node, carrier) delivery.
    std::function<void(const TtiRecord&)> on_tti;
    /// Called whenever a file starts service: (UE index, chosen mode and carriers, TTI).
    std::function<void(std::size_t, const CarrierChoice&, std::int64_t)> on_assign;

    const DeploymentLayout& layout() const noexcept { return layout_; }
    const std::vector<UeTerminal>& ues() const noexcept { return ues_; }
    const LinkBudgetTable& links() const noexcept { return links_; }

    /// Node serving `carrier` for `ue` when in `mode`. CA keeps all carriers on
    /// the node serving the licensed small-cell carrier.
    NodeId serving_node(std::size_t ue, OperationMode mode, CarrierId carrier) const
    {
        return mode == OperationMode::CA ? contexts_[ue].anchor : contexts_[ue].serving.at(carrier);
    }

    /// Per-carrier rate estimate (Mbit/s) for a UE about to join the active set:
    /// bandwidth * SE(SINR against currently active co-channel nodes) / (n + 1).
    RateEstimate estimate(const EngineState& state, std::size_t ue, OperationMode mode) const
    {
        RateEstimate est;
        for (const auto& c : layout_.carriers) {
            if (c.site_kind != SiteKind::small) {
                continue;
            }
            const NodeId node = serving_node(ue, mode, c.id);
            const double se = link_.spectral_efficiency(state.leg_sinr_db(ue, node, c.id));
            est[c.id] = c.bandwidth_mhz * se / static_cast<double>(state.load(node, c.id) + 1);
        }
        return est;
    }

    /// Mode and carrier set for a UE whose next file starts service now.
    CarrierChoice choose(const EngineState& state, std::size_t ue) const
    {
        const auto& ctx = contexts_[ue];
        const auto per_mode_estimate = [&](OperationMode m) { return estimate(state, ue, m); };

        if (policy_ == AllocationPolicy::flexible) {
            if (case_ == ThroughputCase::CA_only) {
                return best_choice(OperationMode::CA, per_mode_estimate(OperationMode::CA));
            }
            std::map<OperationMode, CarrierChoice> best;
            std::map<OperationMode, double> rates;
            for (auto m : kAllModes) {
                best[m] = best_choice(m, per_mode_estimate(m));
                rates[m] = best[m].counted_rate;
            }
            return best.at(select_mode(rates));
        }

        const auto fixed_for = [&](OperationMode m) {
            CarrierChoice c{m, fixed_choice(m, ctx.fixed_unlicensed), 0.0};
            std::sort(c.carriers.begin(), c.carriers.end());
            c.counted_rate = counted_rate(c.carriers, per_mode_estimate(m));
            return c;
        };
        if (case_ == ThroughputCase::CA_only) {
            return fixed_for(OperationMode::CA);
        }
        if (cfg_.fixed_mode == FixedModeSelection::at_start) {
            return fixed_for(ctx.fixed_mode);
        }
        std::map<OperationMode, CarrierChoice> options;
        std::map<OperationMode, double> rates;
        for (auto m : kAllModes) {
            options[m] = fixed_for(m);
            rates[m] = options[m].counted_rate;
        }
        return options.at(select_mode(rates));
    }

    ThroughputReport run()
    {
        ThroughputReport report;
        report.throughput_case = case_;
        report.policy = policy_;
        report.lambda = lambda_;
        report.seed = seed_;

        const double tti_s = cfg_.tti_ms * 1.0e-3;
        const auto total_ttis = static_cast<std::int64_t>(std::llround(cfg_.duration_s / tti_s));
        RngStream arrivals_rng(seed_, "traffic/arrivals");
        const auto arrivals = cfg_.duration_s > 0.0
                                  ? poisson_arrivals(lambda_ * cfg_.lambda_scale, cfg_.duration_s, ues_.size(),
                                                     arrivals_rng, tti_s)
                                  : std::vector<Arrival>{};
        const std::int64_t file_bits = mbytes_to_bits(cfg_.file_size_mbytes);

        jobs_.clear();
        jobs_.reserve(arrivals.size());
        for (auto& ctx : contexts_) {
            ctx.queue.clear();
            ctx.busy = false;
        }

        EngineState state(layout_, links_, cfg_.noise_figure_db, cfg_.tti_ms);
        std::vector<JobGrant> grants;
        bool dirty = true;
        std::vector<std::size_t> freed; // UEs whose file finished last TTI, in completion order
        std::size_t next_arrival = 0;
        const auto start_tti = [&](const Arrival& a) {
            return static_cast<std::int64_t>(std::ceil(a.time / tti_s - 1e-9));
        };

        std::int64_t k = 0;
        const auto start_service = [&](std::size_t ue) {
            auto& ctx = contexts_[ue];
            if (ctx.busy || ctx.queue.empty()) {
                return;
            }
            const std::size_t job = ctx.queue.front();
            ctx.queue.pop_front();
            const auto choice = choose(state, ue);
            if (on_assign) {
                on_assign(ue, choice, k);
            }
            ActiveJob active{job, ue, {}};
            for (CarrierId c : choice.carriers) {
                if (c != kMacroCarrier) {
                    active.legs.push_back({serving_node(ue, choice.mode, c), c});
                }
            }
            ues_[ue].mode = choice.mode;
            ues_[ue].assigned_carriers = choice.carriers;
            ctx.busy = true;
            state.activate(std::move(active));
            dirty = true;
        };

        while (k < total_ttis) {
            if (state.active().empty() && freed.empty()) {
                if (next_arrival >= arrivals.size()) {
                    break;
                }
                k = std::max(k, start_tti(arrivals[next_arrival]));
                if (k >= total_ttis) {
                    break;
                }
            }
            for (std::size_t ue : freed) {
                start_service(ue);
            }
            freed.clear();
            while (next_arrival < arrivals.size() && start_tti(arrivals[next_arrival]) <= k) {
                const auto& a = arrivals[next_arrival++];
                FileJob job;
                job.ue_id = a.ue_id;
                job.arrival_time = a.time;
                job.size = file_bits;
                job.remaining = file_bits;
                jobs_.push_back(job);
                const auto ue = static_cast<std::size_t>(a.ue_id);
                contexts_[ue].queue.push_back(jobs_.size() - 1);
                start_service(ue);
            }

            if (dirty) {
                grants = schedule_tti(state, link_);
                dirty = false;
            }

            TtiRecord record;
            const bool observe = static_cast<bool>(on_tti);
            if (observe) {
                record.tti = k;
            }
            const double end_time = static_cast<double>(k + 1) * tti_s;
            for (std::size_t i = state.active().size(); i-- > 0;) {
                const auto& active = state.active()[i];
                auto& job = jobs_[active.job];
                const auto& grant = grants[i];
                const std::int64_t served = std::min(grant.total, job.remaining);
                job.remaining -= served;
                job.served += served;
                const bool finished = job.remaining == 0;
                if (observe) {
                    record_legs(record, state, active, grant, served, finished);
                }
                if (finished) {
                    job.completion_time = end_time;
                    report.completed.push_back(job);
                    contexts_[active.ue].busy = false;
                    freed.push_back(active.ue);
                    state.deactivate(i);
                    grants.erase(grants.begin() + static_cast<std::ptrdiff_t>(i));
                    dirty = true;
                }
            }
            if (observe) {
                on_tti(record);
            }
            // completion order within a TTI follows the reverse scan; restore arrival order
            std::reverse(freed.begin(), freed.end());
            ++k;
        }

        std::sort(report.completed.begin(), report.completed.end(),
                  [](const FileJob& a, const FileJob& b) { return a.arrival_time < b.arrival_time; });
        summarize(report);
        return report;
    }

    /// Every file generated by the last run, including unfinished ones.
    const std::vector<FileJob>& jobs() const noexcept { return jobs_; }

  private:
    struct UeContext
    {
        std::deque<std::size_t> queue;
        bool busy = false;
        CarrierId fixed_unlicensed = kFirstUnlicensedCarrier;
        OperationMode fixed_mode = OperationMode::CA;
        NodeId anchor = 0;
        std::map<CarrierId, NodeId> serving;
    };

    void record_legs(TtiRecord& record, const EngineState& state, const ActiveJob& active, const JobGrant& grant,
                     std::int64_t served, bool finished) const
    {
        for (std::size_t l = 0; l < active.legs.size(); ++l) {
            const auto& leg = active.legs[l];
            auto it = std::find_if(record.carriers.begin(), record.carriers.end(), [&](const auto& r) {
                return r.node == leg.node && r.carrier == leg.carrier;
            });
            if (it == record.carriers.end()) {
                CarrierTtiRecord r;
                r.node = leg.node;
                r.carrier = leg.carrier;
                r.jobs = state.load(leg.node, leg.carrier);
                record.carriers.push_back(r);
                it = std::prev(record.carriers.end());
            }
            // a finishing job's last grant is trimmed in proportion across its legs
            std::int64_t leg_bits = grant.per_leg[l];
            if (served < grant.total) {
                leg_bits = grant.total > 0 ? static_cast<std::int64_t>(std::floor(
                                                 static_cast<double>(grant.per_leg[l]) * static_cast<double>(served) /
                                                 static_cast<double>(grant.total)))
                                           : 0;
            }
            it->served_bits += leg_bits;
            it->capacity_bits += grant.share[l];
            it->had_completion = it->had_completion || finished;
        }
    }

    SimConfig cfg_;
    ThroughputCase case_;
    AllocationPolicy policy_;
    double lambda_;
    std::uint64_t seed_;
    DeploymentLayout layout_;
    LinkAbstraction link_;
    std::vector<UeTerminal> ues_;
    LinkBudgetTable links_;
    std::vector<UeContext> contexts_;
    std::vector<FileJob> jobs_;
};

/// Runs one (case, policy, load, seed) combination.
inline ThroughputReport run_throughput(const SimConfig& cfg, ThroughputCase tcase, AllocationPolicy policy,
                                       double lambda, std::uint64_t seed)
{
    ThroughputSimulation sim(cfg, tcase, policy, lambda, seed);
    return sim.run();
}

} // namespace lteu
