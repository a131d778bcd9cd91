// lteu_sim: coverage and throughput experiments for licensed/unlicensed
// small-cell deployments.

#include "lteu/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv)
{
    CLI::App app{"LTE small-cell simulator: licensed vs unlicensed coverage and CA vs DC/SA throughput"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lteu::kVersion));

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file (manifest.txt works too)");
        sub->add_option("--seed", seed, "first seed");
        sub->add_option("--seeds", seeds, "number of consecutive seeds")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "output directory");
    };

    auto* coverage = app.add_subcommand("coverage", "coverage CDFs and licensed/unlicensed gaps per layout");
    add_common(coverage);
    std::string ratios;
    std::optional<int> samples;
    coverage->add_option("--ratios", ratios, "comma-separated layouts, e.g. 4:4,4:8,4:16");
    coverage->add_option("--samples", samples, "test points per seed")->check(CLI::PositiveNumber);

    auto* throughput = app.add_subcommand("throughput", "mean user throughput per case, policy and load");
    add_common(throughput);
    std::string cases;
    std::string policies;
    std::string loads;
    std::optional<double> duration;
    throughput->add_option("--cases", cases, "comma-separated: ca,dcsa");
    throughput->add_option("--policies", policies, "comma-separated: fixed,flexible");
    throughput->add_option("--loads", loads, "comma-separated arrival rates, files/s");
    throughput->add_option("--duration", duration, "simulated seconds per run")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        lteu::SimConfig cfg = config_path.empty() ? lteu::SimConfig{} : lteu::parse_config(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        if (seeds) {
            cfg.seeds = *seeds;
        }
        if (!ratios.empty()) {
            lteu::apply_setting(cfg, "coverage.ratios", ratios);
        }
        if (samples) {
            cfg.coverage_samples = *samples;
        }
        if (!cases.empty()) {
            lteu::apply_setting(cfg, "throughput.cases", cases);
        }
        if (!policies.empty()) {
            lteu::apply_setting(cfg, "throughput.policies", policies);
        }
        if (!loads.empty()) {
            lteu::apply_setting(cfg, "throughput.loads", loads);
        }
        if (duration) {
            cfg.duration_s = *duration;
        }

        if (coverage->parsed()) {
            const auto result = lteu::coverage_command(cfg, out_dir);
            for (const auto& g : result.gaps) {
                std::cout << "ratio " << g.ratio << "  p" << lteu::csv_real(g.percentile * 100) << " gap "
                          << lteu::csv_real(g.gap_db) << " dB\n";
            }
        } else {
            const auto reports = lteu::throughput_command(cfg, out_dir);
            for (const auto& s : lteu::summarize_grid(reports)) {
                std::cout << lteu::to_string(s.throughput_case) << " " << lteu::to_string(s.policy) << " lambda "
                          << lteu::csv_real(s.lambda) << ": " << lteu::csv_real(s.mean_mbps) << " Mbit/s over "
                          << s.seeds_with_results << " seeds\n";
            }
        }
    } catch (const lteu::ConfigError& e) {
        std::cerr << "lteu_sim: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lteu_sim: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
