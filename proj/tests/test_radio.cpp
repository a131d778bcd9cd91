#include "lteu/radio.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace lteu {
namespace {

TEST(ReceivedPower, LinkBudgetArithmetic)
{
    EXPECT_DOUBLE_EQ(received_power(24.0, {58.0, 0.0, 0.0}), -34.0);
    EXPECT_DOUBLE_EQ(received_power(24.0, {0.0, 0.0, 0.0}), 24.0);
    EXPECT_DOUBLE_EQ(received_power(24.0, {58.0, 3.0, 20.0}), -57.0);
}

TEST(ReceivedPower, SlopeOneInTxPower)
{
    const LinkLoss loss{63.2, -1.4, 0.0};
    for (double tx = -10.0; tx < 40.0; tx += 2.5) {
        EXPECT_NEAR(received_power(tx + 1.0, loss) - received_power(tx, loss), 1.0, 1e-12);
    }
}

TEST(NoisePower, ThermalFloorPlusFigure)
{
    EXPECT_NEAR(noise_power(20.0, 9.0), -91.99, 0.01);
    EXPECT_NEAR(noise_power(10.0, 9.0), -95.00, 0.01);
    EXPECT_NEAR(noise_power(1.0e-6, 0.0), -174.0, 1e-9);
    EXPECT_THROW(noise_power(0.0, 9.0), DomainError);
}

TEST(Sinr, Examples)
{
    EXPECT_NEAR(sinr(-82.0, {}, -92.0), 10.0, 1e-9);
    const std::vector<double> one{-60.0};
    EXPECT_NEAR(sinr(-60.0, one, -300.0), 0.0, 1e-9);
    const std::vector<double> weak{-70.0};
    EXPECT_NEAR(sinr(-60.0, weak, -92.0), 9.97, 0.01);
}

TEST(Sinr, ShiftInvariantInDbDomain)
{
    const std::vector<double> interf{-71.0, -77.5, -80.2};
    const double base = sinr(-63.0, interf, -92.0);
    for (double shift : {-30.0, -3.3, 0.5, 17.0}) {
        std::vector<double> shifted;
        for (double i : interf) {
            shifted.push_back(i + shift);
        }
        EXPECT_NEAR(sinr(-63.0 + shift, shifted, -92.0 + shift), base, 1e-9);
    }
}

TEST(Sinr, RemovingInterfererNeverDecreases)
{
    std::vector<double> interf{-71.0, -77.5, -80.2, -66.0};
    double prev = sinr(-63.0, interf, -92.0);
    while (!interf.empty()) {
        interf.pop_back();
        const double now = sinr(-63.0, interf, -92.0);
        EXPECT_GE(now, prev);
        prev = now;
    }
}

TEST(SpectralEfficiency, TruncatedShannon)
{
    EXPECT_NEAR(spectral_efficiency(0.0), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(spectral_efficiency(30.0), 6.0);
    EXPECT_NEAR(std::log2(1.0 + db_to_linear(30.0)), 9.97, 0.01);
    EXPECT_DOUBLE_EQ(spectral_efficiency(-20.0), 0.0);
    EXPECT_GT(spectral_efficiency(-10.0), 0.0);
}

TEST(SpectralEfficiency, NondecreasingAndBounded)
{
    double prev = spectral_efficiency(-40.0);
    for (double s = -40.0; s <= 60.0; s += 0.05) {
        const double se = spectral_efficiency(s);
        EXPECT_GE(se, prev);
        EXPECT_GE(se, 0.0);
        EXPECT_LE(se, 6.0);
        prev = se;
    }
    const LinkAbstraction custom{-5.0, 4.0};
    EXPECT_DOUBLE_EQ(custom.spectral_efficiency(-6.0), 0.0);
    EXPECT_DOUBLE_EQ(custom.spectral_efficiency(40.0), 4.0);
}

std::vector<Point2D> single(Point2D p) { return {p}; }

TEST(Associate, ZeroDistanceDominates)
{
    const auto layout = build_layout("4:4");
    const auto ues = single({15.0, 25.0});
    const LinkBudgetTable links(layout, ues, {0.0, false}, 1);
    EXPECT_EQ(associate(layout, 2, links, 0), 0);
    EXPECT_EQ(associate(layout, 1, links, 0), 0);
}

TEST(Associate, TieGoesToLowestNodeId)
{
    const auto layout = build_layout("4:4");
    const auto ues = single({30.0, 25.0}); // midway between nodes 0 and 1
    const LinkBudgetTable links(layout, ues, {0.0, false}, 1);
    EXPECT_EQ(links.rx_dbm(0, 0, 2), links.rx_dbm(0, 1, 2));
    EXPECT_EQ(associate(layout, 2, links, 0), 0);

    const auto l16 = build_layout("4:16");
    EXPECT_EQ(associate(l16, 2, [](NodeId) { return -50.0; }), 4); // first unlicensed-only node
}

TEST(Associate, NoCarryingNodeIsConfigError)
{
    const auto layout = build_layout("4:4");
    EXPECT_THROW(associate(layout, 9, [](NodeId) { return 0.0; }), ConfigError);
}

TEST(Associate, MovingCloserKeepsServingNode)
{
    const auto layout = build_layout("4:16");
    RngStream rng(17, "sweep");
    for (int trial = 0; trial < 200; ++trial) {
        Point2D p{rng.uniform_open(0, 120), rng.uniform_open(0, 50)};
        const LinkBudgetTable start(layout, single(p), {0.0, false}, 1);
        const NodeId k = associate(layout, 2, start, 0);
        const Point2D target = layout.nodes[static_cast<std::size_t>(k)].position;
        for (int step = 1; step <= 20; ++step) {
            const double f = step / 20.0;
            Point2D q{p.x + (target.x - p.x) * f, p.y + (target.y - p.y) * f};
            const LinkBudgetTable moved(layout, single(q), {0.0, false}, 1);
            EXPECT_EQ(associate(layout, 2, moved, 0), k) << "trial " << trial << " step " << step;
        }
    }
}

TEST(LinkBudgetTable, ShadowingFrozenPerFrequency)
{
    // Carriers 3 and 4 share 5.8 GHz, so their draws must coincide per (UE, node).
    std::vector<CarrierSpec> carriers{
        {2, 3.5, 10.0, BandClass::licensed, 24.0, SiteKind::small},
        {3, 5.8, 20.0, BandClass::unlicensed, 24.0, SiteKind::small},
        {4, 5.8, 20.0, BandClass::unlicensed, 24.0, SiteKind::small},
    };
    const auto layout = build_layout("4:4", carriers);
    std::vector<Point2D> ues{{10.0, 10.0}, {70.0, 40.0}};
    const LinkBudgetTable a(layout, ues, {3.0, false}, 42);
    const LinkBudgetTable b(layout, ues, {3.0, false}, 42);
    for (std::size_t u = 0; u < ues.size(); ++u) {
        for (const auto& node : layout.nodes) {
            EXPECT_EQ(a.rx_dbm(u, node.id, 3), a.rx_dbm(u, node.id, 4));
            EXPECT_EQ(a.rx_dbm(u, node.id, 2), b.rx_dbm(u, node.id, 2));
        }
    }
    const LinkBudgetTable flat(layout, ues, {0.0, false}, 42);
    const double d = std::hypot(10.0 - 15.0, 10.0 - 25.0);
    EXPECT_NEAR(flat.rx_dbm(0, 0, 3), 24.0 - inh_los_pathloss(d, 5.8), 1e-9);
}

TEST(LinkBudgetTable, PenetrationAddsBandBase)
{
    const auto layout = build_layout("4:4");
    const auto ues = single({50.0, 20.0});
    const LinkBudgetTable off(layout, ues, {0.0, false}, 5);
    const LinkBudgetTable on(layout, ues, {0.0, true}, 5);
    for (const auto& node : layout.nodes) {
        const double lic = off.rx_dbm(0, node.id, 1) - on.rx_dbm(0, node.id, 1);
        const double unl = off.rx_dbm(0, node.id, 2) - on.rx_dbm(0, node.id, 2);
        EXPECT_GE(lic, 20.0);
        EXPECT_LE(lic, 32.5);
        EXPECT_GE(unl, 27.0);
        EXPECT_LE(unl, 39.5);
    }
}

} // namespace
} // namespace lteu
