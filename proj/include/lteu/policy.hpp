#pragma once

#include "lteu/errors.hpp"
#include "lteu/scenario.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lteu {

// Carrier ids of the four-carrier system.
inline constexpr CarrierId kMacroCarrier = 1;
inline constexpr CarrierId kSmallLicensedCarrier = 2;
inline constexpr CarrierId kFirstUnlicensedCarrier = 3;
inline constexpr CarrierId kSecondUnlicensedCarrier = 4;

inline constexpr std::array<OperationMode, 3> kAllModes{OperationMode::CA, OperationMode::DC, OperationMode::SA};

inline std::string to_string(OperationMode m)
{
    switch (m) {
    case OperationMode::CA:
        return "CA";
    case OperationMode::DC:
        return "DC";
    case OperationMode::SA:
        return "SA";
    }
    return "?";
}

/// The four carriers available to UEs: the macro anchor, one 10 MHz licensed
/// small-cell carrier at 3.5 GHz and two 20 MHz unlicensed carriers at 5.8 GHz.
/// The macro carrier has no geometric model; its bandwidth and power are nominal.
inline std::vector<CarrierSpec> carrier_table(double small_cell_tx_dbm = 24.0)
{
    return {
        {kMacroCarrier, 2.0, 20.0, BandClass::licensed, 46.0, SiteKind::macro},
        {kSmallLicensedCarrier, 3.5, 10.0, BandClass::licensed, small_cell_tx_dbm, SiteKind::small},
        {kFirstUnlicensedCarrier, 5.8, 20.0, BandClass::unlicensed, small_cell_tx_dbm, SiteKind::small},
        {kSecondUnlicensedCarrier, 5.8, 20.0, BandClass::unlicensed, small_cell_tx_dbm, SiteKind::small},
    };
}

/// Carriers a mode must hold (`fixed`) plus `picks` distinct carriers chosen from `pool`.
struct CandidateSet
{
    std::vector<CarrierId> fixed;
    std::vector<CarrierId> pool;
    int picks = 0;

    std::size_t size() const { return fixed.size() + static_cast<std::size_t>(picks); }
};

inline CandidateSet candidate_carriers(OperationMode mode)
{
    switch (mode) {
    case OperationMode::CA:
        return {{kMacroCarrier, kSmallLicensedCarrier}, {kFirstUnlicensedCarrier, kSecondUnlicensedCarrier}, 1};
    case OperationMode::DC:
        return {{kMacroCarrier}, {kSmallLicensedCarrier, kFirstUnlicensedCarrier, kSecondUnlicensedCarrier}, 2};
    case OperationMode::SA:
        return {{}, {kFirstUnlicensedCarrier, kSecondUnlicensedCarrier}, 2};
    }
    return {};
}

/// True when `carriers` is a legal assignment for `mode` within the UE capability.
inline bool satisfies_candidates(OperationMode mode, std::span<const CarrierId> carriers,
                                 int capability = kUeCarrierCapability)
{
    if (carriers.size() > static_cast<std::size_t>(capability)) {
        return false;
    }
    std::vector<CarrierId> sorted(carriers.begin(), carriers.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return false;
    }
    const auto cand = candidate_carriers(mode);
    int from_pool = 0;
    for (CarrierId c : sorted) {
        const bool is_fixed = std::find(cand.fixed.begin(), cand.fixed.end(), c) != cand.fixed.end();
        const bool in_pool = std::find(cand.pool.begin(), cand.pool.end(), c) != cand.pool.end();
        if (in_pool && !is_fixed) {
            ++from_pool;
        } else if (!is_fixed) {
            return false;
        }
    }
    for (CarrierId f : cand.fixed) {
        if (!std::binary_search(sorted.begin(), sorted.end(), f)) {
            return false;
        }
    }
    return from_pool == cand.picks;
}

/// Every legal carrier set for a mode, each sorted ascending.
inline std::vector<std::vector<CarrierId>> enumerate_choices(OperationMode mode)
{
    const auto cand = candidate_carriers(mode);
    std::vector<std::vector<CarrierId>> out;
    const std::size_t n = cand.pool.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != cand.picks) {
            continue;
        }
        std::vector<CarrierId> set = cand.fixed;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                set.push_back(cand.pool[i]);
            }
        }
        std::sort(set.begin(), set.end());
        out.push_back(std::move(set));
    }
    return out;
}

/// Estimated achievable rate per carrier, Mbit/s.
using RateEstimate = std::map<CarrierId, double>;

/// Round-robin split of UEs (in list order) over the unlicensed carriers.
/// The result is computed once and never revisited during a run.
inline std::map<int, CarrierId> allocate_fixed(std::span<const int> ue_ids, std::span<const CarrierId> unlicensed)
{
    if (unlicensed.empty()) {
        throw ConfigError("fixed allocation needs at least one unlicensed carrier");
    }
    std::map<int, CarrierId> out;
    for (std::size_t i = 0; i < ue_ids.size(); ++i) {
        out[ue_ids[i]] = unlicensed[i % unlicensed.size()];
    }
    return out;
}

/// CSI-driven choice: the carrier with the highest estimated rate, lowest id on ties.
inline CarrierId allocate_flexible(const RateEstimate& estimates)
{
    if (estimates.empty()) {
        throw DomainError("flexible allocation needs at least one rate estimate");
    }
    auto best = estimates.begin();
    for (auto it = std::next(best); it != estimates.end(); ++it) {
        if (it->second > best->second) {
            best = it;
        }
    }
    return best->first;
}

/// Sum of estimated rates over the carriers that count toward throughput
/// (all small-cell carriers; the macro anchor contributes nothing).
inline double counted_rate(std::span<const CarrierId> carriers, const RateEstimate& estimates)
{
    double total = 0.0;
    for (CarrierId c : carriers) {
        if (c == kMacroCarrier) {
            continue;
        }
        auto it = estimates.find(c);
        if (it == estimates.end()) {
            throw DomainError("missing rate estimate for carrier " + std::to_string(c));
        }
        total += it->second;
    }
    return total;
}

struct CarrierChoice
{
    OperationMode mode = OperationMode::CA;
    std::vector<CarrierId> carriers; // ascending
    double counted_rate = 0.0;
};

/// Best legal carrier set for a mode under the estimates: the fixed carriers
/// plus repeated flexible picks from the remaining pool.
inline CarrierChoice best_choice(OperationMode mode, const RateEstimate& estimates)
{
    const auto cand = candidate_carriers(mode);
    CarrierChoice choice{mode, cand.fixed, 0.0};
    RateEstimate remaining;
    for (CarrierId c : cand.pool) {
        auto it = estimates.find(c);
        if (it == estimates.end()) {
            throw DomainError("missing rate estimate for carrier " + std::to_string(c));
        }
        remaining.insert(*it);
    }
    for (int k = 0; k < cand.picks; ++k) {
        const CarrierId pick = allocate_flexible(remaining);
        choice.carriers.push_back(pick);
        remaining.erase(pick);
    }
    std::sort(choice.carriers.begin(), choice.carriers.end());
    choice.counted_rate = counted_rate(choice.carriers, estimates);
    return choice;
}

/// Carrier set under fixed allocation. CA and DC pair the licensed small-cell
/// carrier with the UE's statically assigned unlicensed carrier; SA holds both
/// unlicensed carriers.
inline std::vector<CarrierId> fixed_choice(OperationMode mode, CarrierId assigned_unlicensed)
{
    switch (mode) {
    case OperationMode::CA:
    case OperationMode::DC:
        return {kMacroCarrier, kSmallLicensedCarrier, assigned_unlicensed};
    case OperationMode::SA:
        return {kFirstUnlicensedCarrier, kSecondUnlicensedCarrier};
    }
    return {};
}

/// Mode with the highest estimated counted rate; ties prefer SA, then DC, then CA.
inline OperationMode select_mode(const std::map<OperationMode, double>& per_mode_rate)
{
    for (auto m : kAllModes) {
        if (!per_mode_rate.contains(m)) {
            throw DomainError("mode selection needs an estimate for " + to_string(m));
        }
    }
    OperationMode best = OperationMode::SA;
    for (auto m : {OperationMode::DC, OperationMode::CA}) {
        if (per_mode_rate.at(m) > per_mode_rate.at(best)) {
            best = m;
        }
    }
    return best;
}

} // namespace lteu
