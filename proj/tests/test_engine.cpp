#include "lteu/coverage.hpp"
#include "lteu/engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

namespace lteu {
namespace {

// Two nodes on one 20 MHz carrier, UEs with hand-set received powers.
struct TinySystem
{
    DeploymentLayout layout;
    LinkBudgetTable links;

    TinySystem()
    {
        layout.carriers = {{7, 5.8, 20.0, BandClass::unlicensed, 24.0, SiteKind::small}};
        layout.nodes = {{0, {10.0, 25.0}, {7}}, {1, {110.0, 25.0}, {7}}};
        // [ue][node][carrier]: UEs 0,1 near node 0; UE 2 near node 1
        links = LinkBudgetTable::from_values(3, 2, {7}, {-40.0, -80.0, -41.0, -79.0, -85.0, -45.0});
    }
};

TEST(ScheduleTti, EqualShareExamples)
{
    TinySystem sys;
    EngineState state(sys.layout, sys.links, 9.0, 1.0);
    const LinkAbstraction se2{-10.0, 2.0}; // high SINR, so SE sits on the 2.0 cap

    state.activate({0, 0, {{0, 7}}});
    auto grants = schedule_tti(state, se2);
    ASSERT_EQ(grants.size(), 1u);
    EXPECT_EQ(grants[0].total, 40'000);

    state.activate({1, 1, {{0, 7}}});
    grants = schedule_tti(state, se2);
    ASSERT_EQ(grants.size(), 2u);
    EXPECT_EQ(grants[0].total, 20'000);
    EXPECT_EQ(grants[1].total, 20'000);
}

TEST(ScheduleTti, IdleNodesDoNotInterfere)
{
    TinySystem sys;
    EngineState state(sys.layout, sys.links, 9.0, 1.0);
    const double noise = noise_power(20.0, 9.0);

    state.activate({0, 0, {{0, 7}}});
    EXPECT_NEAR(state.leg_sinr_db(0, 0, 7), -40.0 - noise, 1e-9);

    state.activate({1, 2, {{1, 7}}});
    const std::vector<double> interf{-80.0};
    EXPECT_NEAR(state.leg_sinr_db(0, 0, 7), sinr(-40.0, interf, noise), 1e-9);
    EXPECT_LT(state.leg_sinr_db(0, 0, 7), -40.0 - noise);

    state.deactivate(1);
    EXPECT_EQ(state.load(1, 7), 0);
    EXPECT_NEAR(state.leg_sinr_db(0, 0, 7), -40.0 - noise, 1e-9);
}

TEST(ScheduleTti, MultiCarrierJobSumsLegs)
{
    DeploymentLayout layout;
    layout.carriers = {{2, 3.5, 10.0, BandClass::licensed, 24.0, SiteKind::small},
                       {3, 5.8, 20.0, BandClass::unlicensed, 24.0, SiteKind::small}};
    layout.nodes = {{0, {60.0, 25.0}, {2, 3}}};
    const auto links = LinkBudgetTable::from_values(1, 1, {2, 3}, {-30.0, -30.0});
    EngineState state(layout, links, 9.0, 1.0);
    state.activate({0, 0, {{0, 2}, {0, 3}}});
    const auto grants = schedule_tti(state, LinkAbstraction{});
    ASSERT_EQ(grants[0].per_leg.size(), 2u);
    EXPECT_EQ(grants[0].per_leg[0], 60'000);  // 10 MHz * 6
    EXPECT_EQ(grants[0].per_leg[1], 120'000); // 20 MHz * 6
    EXPECT_EQ(grants[0].total, 180'000);
}

SimConfig short_config(double duration = 20.0)
{
    SimConfig cfg;
    cfg.duration_s = duration;
    return cfg;
}

TEST(ThroughputSimulation, ZeroDurationIsEmptyReport)
{
    const auto r = run_throughput(short_config(0.0), ThroughputCase::DC_SA, AllocationPolicy::flexible, 2.5, 1);
    EXPECT_EQ(r.completed_files(), 0u);
    EXPECT_FALSE(r.mean_user_tput_mbps.has_value());
}

TEST(ThroughputSimulation, RequiresCoLocatedLayout)
{
    auto cfg = short_config();
    cfg.ratio = "4:8";
    EXPECT_THROW(run_throughput(cfg, ThroughputCase::CA_only, AllocationPolicy::fixed, 2.5, 1), ConfigError);
}

TEST(ThroughputSimulation, EightyUesOnFourNodes)
{
    ThroughputSimulation sim(short_config(), ThroughputCase::CA_only, AllocationPolicy::fixed, 2.5, 3);
    EXPECT_EQ(sim.ues().size(), 80u);
    EXPECT_EQ(sim.layout().nodes.size(), 4u);
}

TEST(ThroughputSimulation, ConservationAndCapacityBound)
{
    for (auto tcase : {ThroughputCase::CA_only, ThroughputCase::DC_SA}) {
        for (auto policy : {AllocationPolicy::fixed, AllocationPolicy::flexible}) {
            ThroughputSimulation sim(short_config(), tcase, policy, 10.0, 11);
            std::int64_t ttis_with_traffic = 0;
            sim.on_tti = [&](const TtiRecord& rec) {
                ++ttis_with_traffic;
                for (const auto& c : rec.carriers) {
                    EXPECT_LE(static_cast<double>(c.served_bits), c.capacity_bits + 1e-6);
                    if (!c.had_completion) {
                        // work conservation up to whole-bit flooring per job
                        EXPECT_GE(static_cast<double>(c.served_bits), c.capacity_bits - c.jobs);
                    }
                }
            };
            const auto r = sim.run();
            ASSERT_GT(r.completed_files(), 0u);
            EXPECT_GT(ttis_with_traffic, 0);
            for (const auto& job : r.completed) {
                EXPECT_EQ(job.served, 4'000'000);
                EXPECT_EQ(job.remaining, 0);
                EXPECT_GE(*job.completion_time - job.arrival_time, 1e-3 - 1e-12);
            }
            for (const auto& job : sim.jobs()) {
                EXPECT_EQ(job.served + job.remaining, job.size);
            }
        }
    }
}

TEST(ThroughputSimulation, AssignmentsObeyCandidateRules)
{
    for (auto tcase : {ThroughputCase::CA_only, ThroughputCase::DC_SA}) {
        for (auto policy : {AllocationPolicy::fixed, AllocationPolicy::flexible}) {
            ThroughputSimulation sim(short_config(), tcase, policy, 10.0, 5);
            std::map<std::size_t, std::set<std::vector<CarrierId>>> per_ue;
            std::set<OperationMode> modes;
            sim.on_assign = [&](std::size_t ue, const CarrierChoice& c, std::int64_t) {
                EXPECT_TRUE(satisfies_candidates(c.mode, c.carriers));
                EXPECT_LE(c.carriers.size(), 3u);
                if (tcase == ThroughputCase::CA_only) {
                    EXPECT_EQ(c.mode, OperationMode::CA);
                }
                per_ue[ue].insert(c.carriers);
                modes.insert(c.mode);
            };
            sim.run();
            if (policy == AllocationPolicy::fixed) {
                // fixed allocation never changes over the run
                for (const auto& [ue, sets] : per_ue) {
                    EXPECT_EQ(sets.size(), 1u) << "ue " << ue;
                }
            }
            if (tcase == ThroughputCase::DC_SA && policy == AllocationPolicy::fixed) {
                EXPECT_EQ(modes.size(), 3u);
            }
        }
    }
}

TEST(ThroughputSimulation, CaServesFromOneNode)
{
    ThroughputSimulation sim(short_config(), ThroughputCase::CA_only, AllocationPolicy::flexible, 10.0, 8);
    for (std::size_t u = 0; u < sim.ues().size(); ++u) {
        for (CarrierId c : {2, 3, 4}) {
            EXPECT_EQ(sim.serving_node(u, OperationMode::CA, c), sim.serving_node(u, OperationMode::CA, 2));
        }
    }
}

TEST(ThroughputSimulation, DeterministicPerSeed)
{
    const auto cfg = short_config();
    const auto a = run_throughput(cfg, ThroughputCase::DC_SA, AllocationPolicy::flexible, 10.0, 21);
    const auto b = run_throughput(cfg, ThroughputCase::DC_SA, AllocationPolicy::flexible, 10.0, 21);
    ASSERT_EQ(a.per_file_mbps.size(), b.per_file_mbps.size());
    EXPECT_EQ(a.per_file_mbps, b.per_file_mbps);
    EXPECT_EQ(*a.mean_user_tput_mbps, *b.mean_user_tput_mbps);
    const auto c = run_throughput(cfg, ThroughputCase::DC_SA, AllocationPolicy::flexible, 10.0, 22);
    EXPECT_NE(a.per_file_mbps, c.per_file_mbps);
}

TEST(ThroughputSimulation, PerArrivalFixedModeUsesSelection)
{
    auto cfg = short_config();
    cfg.fixed_mode = FixedModeSelection::per_arrival;
    ThroughputSimulation sim(cfg, ThroughputCase::DC_SA, AllocationPolicy::fixed, 2.5, 4);
    std::size_t sa = 0;
    std::size_t total = 0;
    sim.on_assign = [&](std::size_t, const CarrierChoice& c, std::int64_t) {
        ++total;
        sa += c.mode == OperationMode::SA ? 1 : 0;
    };
    sim.run();
    ASSERT_GT(total, 0u);
    // two 20 MHz carriers beat 10 + 20 MHz almost everywhere at light load
    EXPECT_GT(static_cast<double>(sa) / static_cast<double>(total), 0.9);
}

TEST(ThroughputSimulation, DcSaBeatsCaOnSharedSeeds)
{
    double ca = 0.0;
    double dcsa = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ca += *run_throughput(short_config(), ThroughputCase::CA_only, AllocationPolicy::flexible, 2.5, seed)
                   .mean_user_tput_mbps;
        dcsa += *run_throughput(short_config(), ThroughputCase::DC_SA, AllocationPolicy::flexible, 2.5, seed)
                     .mean_user_tput_mbps;
    }
    EXPECT_GT(dcsa, ca);
}

TEST(Coverage, CoLocatedNoShadowGapIsFrequencyOffset)
{
    SimConfig cfg;
    cfg.shadowing_sigma_db = 0.0;
    cfg.coverage_samples = 2000;
    const std::vector<std::string> ratios{"4:4"};
    const std::vector<std::uint64_t> seeds{7};
    const auto r = run_coverage(cfg, ratios, seeds);
    const double offset = 20.0 * std::log10(5.8 / 2.6);
    for (const auto& g : r.gaps) {
        EXPECT_NEAR(g.gap_db, offset, 1e-9);
    }
    EXPECT_NEAR(r.gaps.back().gap_db, 6.97, 0.01);
}

TEST(Coverage, GapShrinksWithDensification)
{
    SimConfig cfg;
    cfg.coverage_samples = 3000;
    const std::vector<std::uint64_t> seeds{1};
    const auto r = run_coverage(cfg, cfg.coverage_ratios, seeds);
    ASSERT_EQ(r.curves.size(), 6u);
    std::map<std::string, double> median;
    for (const auto& g : r.gaps) {
        if (g.percentile == kHeadlinePercentile) {
            median[g.ratio] = g.gap_db;
        }
    }
    EXPECT_GT(median["4:4"], median["4:8"]);
    EXPECT_GT(median["4:8"], median["4:16"]);
    EXPECT_NEAR(median["4:4"], 6.97, 0.5);
}

TEST(Coverage, CurvesAreValidCdfs)
{
    SimConfig cfg;
    cfg.coverage_samples = 500;
    const std::vector<std::uint64_t> seeds{2, 3};
    const auto r = run_coverage(cfg, cfg.coverage_ratios, seeds);
    for (const auto& c : r.curves) {
        EXPECT_EQ(c.rsrp_dbm.size(), 1000u);
        EXPECT_EQ(c.sinr_db.size(), 1000u);
        double prev = 0.0;
        for (double v : c.rsrp_dbm.samples()) {
            const double f = c.rsrp_dbm(v);
            EXPECT_GE(f, prev);
            EXPECT_GT(f, 0.0);
            EXPECT_LE(f, 1.0);
            prev = f;
        }
    }
}

TEST(Coverage, ZeroSamplesIsDomainError)
{
    SimConfig cfg;
    cfg.coverage_samples = 0;
    EXPECT_THROW(run_coverage(cfg), DomainError);
}

} // namespace
} // namespace lteu
