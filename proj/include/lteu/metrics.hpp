#pragma once

#include "lteu/errors.hpp"
#include "lteu/scenario.hpp"
#include "lteu/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lteu {

/// Empirical CDF over a sample set.
class CdfCurve
{
  public:
    CdfCurve() = default;

    explicit CdfCurve(std::vector<double> samples) : sorted_(std::move(samples))
    {
        std::sort(sorted_.begin(), sorted_.end());
    }

    /// Fraction of samples <= x.
    double operator()(double x) const
    {
        if (sorted_.empty()) {
            return 0.0;
        }
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    /// Smallest sample v with CDF(v) >= p, for 0 < p < 1.
    double percentile(double p) const
    {
        if (sorted_.empty()) {
            throw DomainError("percentile of an empty curve");
        }
        if (!(p > 0.0 && p < 1.0)) {
            throw DomainError("percentile fraction must lie in (0, 1)");
        }
        const auto n = static_cast<std::ptrdiff_t>(sorted_.size());
        const auto frac = [n](std::ptrdiff_t k) { return static_cast<double>(k + 1) / static_cast<double>(n); };
        auto k = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::ceil(p * static_cast<double>(n))) - 1,
                                            0, n - 1);
        // Settle rounding in p*n against the exact definition.
        while (k > 0 && frac(k - 1) >= p) {
            --k;
        }
        while (k < n - 1 && frac(k) < p) {
            ++k;
        }
        return sorted_[static_cast<std::size_t>(k)];
    }

    const std::vector<double>& samples() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return sorted_.size(); }
    bool empty() const noexcept { return sorted_.empty(); }

  private:
    std::vector<double> sorted_;
};

inline double percentile(const CdfCurve& curve, double p) { return curve.percentile(p); }

/// Licensed minus unlicensed value at percentile p, in dB.
inline double coverage_gap(const CdfCurve& licensed, const CdfCurve& unlicensed, double p)
{
    return licensed.percentile(p) - unlicensed.percentile(p);
}

/// Per-file throughput in Mbit/s: size / (completion - arrival).
inline double file_throughput_mbps(const FileJob& job)
{
    if (!job.completion_time) {
        throw DomainError("file has not completed");
    }
    return static_cast<double>(job.size) / (*job.completion_time - job.arrival_time) / 1.0e6;
}

/// Mean of per-file throughputs over completed files, Mbit/s.
inline double mean_user_throughput(std::span<const FileJob> jobs)
{
    if (jobs.empty()) {
        throw DomainError("mean user throughput of an empty job set");
    }
    double sum = 0.0;
    for (const auto& j : jobs) {
        sum += file_throughput_mbps(j);
    }
    return sum / static_cast<double>(jobs.size());
}

struct ThroughputReport
{
    ThroughputCase throughput_case = ThroughputCase::CA_only;
    AllocationPolicy policy = AllocationPolicy::fixed;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> mean_user_tput_mbps; // empty when no file completed
    std::vector<double> per_file_mbps;
    std::vector<FileJob> completed;

    std::size_t completed_files() const noexcept { return completed.size(); }
};

/// Fills the throughput fields of a report from its completed jobs.
inline void summarize(ThroughputReport& report)
{
    report.per_file_mbps.clear();
    for (const auto& j : report.completed) {
        report.per_file_mbps.push_back(file_throughput_mbps(j));
    }
    if (report.completed.empty()) {
        report.mean_user_tput_mbps.reset();
    } else {
        report.mean_user_tput_mbps = mean_user_throughput(report.completed);
    }
}

} // namespace lteu
