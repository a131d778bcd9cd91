#pragma once

#include "lteu/config.hpp"
#include "lteu/coverage.hpp"
#include "lteu/engine.hpp"
#include "lteu/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace lteu {

inline constexpr std::string_view kCoverageCdfHeader = "ratio,band_ghz,metric,sample_value";
inline constexpr std::string_view kGapsHeader = "ratio,percentile,gap_db";
inline constexpr std::string_view kThroughputHeader = "case,policy,lambda,seed,mean_user_tput_mbps,completed_files";
inline constexpr std::string_view kSummaryHeader = "case,policy,lambda,mean_user_tput_mbps,seeds_with_results";

/// Fixed 6-significant-digit rendering used for every real in the CSVs.
inline std::string csv_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string coverage_cdf_csv(const CoverageResult& result)
{
    std::string out(kCoverageCdfHeader);
    out += '\n';
    for (const auto& c : result.curves) {
        const std::string prefix = c.ratio + "," + csv_real(c.band_ghz) + ",";
        for (double v : c.rsrp_dbm.samples()) {
            out += prefix + "rsrp_dbm," + csv_real(v) + "\n";
        }
        for (double v : c.sinr_db.samples()) {
            out += prefix + "sinr_db," + csv_real(v) + "\n";
        }
    }
    return out;
}

inline std::string gaps_csv(const CoverageResult& result)
{
    std::string out(kGapsHeader);
    out += '\n';
    for (const auto& g : result.gaps) {
        out += g.ratio + "," + csv_real(g.percentile) + "," + csv_real(g.gap_db) + "\n";
    }
    return out;
}

/// Per-seed rows in canonical order: case, policy, load, seed.
inline std::vector<ThroughputReport> run_throughput_grid(const SimConfig& cfg)
{
    std::vector<ThroughputReport> reports;
    auto cases = cfg.cases;
    auto policies = cfg.policies;
    auto loads = cfg.loads;
    std::sort(cases.begin(), cases.end());
    std::sort(policies.begin(), policies.end());
    std::sort(loads.begin(), loads.end());
    for (auto tcase : cases) {
        for (auto policy : policies) {
            for (double lambda : loads) {
                for (auto seed : cfg.seed_list()) {
                    auto report = run_throughput(cfg, tcase, policy, lambda, seed);
                    report.completed.clear(); // per-file detail is not serialized
                    reports.push_back(std::move(report));
                }
            }
        }
    }
    return reports;
}

inline std::string throughput_csv(const std::vector<ThroughputReport>& reports)
{
    std::string out(kThroughputHeader);
    out += '\n';
    for (const auto& r : reports) {
        out += to_string(r.throughput_case) + "," + to_string(r.policy) + "," + csv_real(r.lambda) + "," +
               std::to_string(r.seed) + "," + (r.mean_user_tput_mbps ? csv_real(*r.mean_user_tput_mbps) : "") + "," +
               std::to_string(r.per_file_mbps.size()) + "\n";
    }
    return out;
}

struct SummaryRow
{
    ThroughputCase throughput_case;
    AllocationPolicy policy;
    double lambda;
    double mean_mbps; // average of per-seed means
    int seeds_with_results;
};

inline std::vector<SummaryRow> summarize_grid(const std::vector<ThroughputReport>& reports)
{
    std::vector<SummaryRow> rows;
    for (const auto& r : reports) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) {
            return s.throughput_case == r.throughput_case && s.policy == r.policy && s.lambda == r.lambda;
        });
        if (it == rows.end()) {
            rows.push_back({r.throughput_case, r.policy, r.lambda, 0.0, 0});
            it = std::prev(rows.end());
        }
        if (r.mean_user_tput_mbps) {
            it->mean_mbps += *r.mean_user_tput_mbps;
            ++it->seeds_with_results;
        }
    }
    for (auto& s : rows) {
        if (s.seeds_with_results > 0) {
            s.mean_mbps /= s.seeds_with_results;
        }
    }
    return rows;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows)
{
    std::string out(kSummaryHeader);
    out += '\n';
    for (const auto& s : rows) {
        out += to_string(s.throughput_case) + "," + to_string(s.policy) + "," + csv_real(s.lambda) + "," +
               (s.seeds_with_results > 0 ? csv_real(s.mean_mbps) : "") + "," + std::to_string(s.seeds_with_results) +
               "\n";
    }
    return out;
}

/// Effective config plus provenance. The file is itself a valid config, so
/// `--config manifest.txt` replays the run.
inline std::string manifest_text(const SimConfig& cfg, std::string_view subcommand,
                                 const std::vector<std::string>& outputs)
{
    std::string out = "# lteu_sim run manifest\n";
    out += emit_config(cfg);
    out += "manifest.version = " + std::string(kVersion) + "\n";
    out += "manifest.subcommand = " + std::string(subcommand) + "\n";
    out += "manifest.seed_list = " +
           config_detail::join(cfg.seed_list(), [](std::uint64_t s) { return std::to_string(s); }) + "\n";
    out += "manifest.outputs = " + config_detail::join(outputs, [](const std::string& s) { return s; }) + "\n";
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

inline CoverageResult coverage_command(const SimConfig& cfg, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    auto result = run_coverage(cfg);
    write_file(out_dir / "coverage_cdf.csv", coverage_cdf_csv(result));
    write_file(out_dir / "gaps.csv", gaps_csv(result));
    write_file(out_dir / "manifest.txt", manifest_text(cfg, "coverage", {"coverage_cdf.csv", "gaps.csv"}));
    return result;
}

inline std::vector<ThroughputReport> throughput_command(const SimConfig& cfg, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    auto reports = run_throughput_grid(cfg);
    write_file(out_dir / "throughput.csv", throughput_csv(reports));
    write_file(out_dir / "summary.csv", summary_csv(summarize_grid(reports)));
    write_file(out_dir / "manifest.txt", manifest_text(cfg, "throughput", {"throughput.csv", "summary.csv"}));
    return reports;
}

} // namespace lteu
