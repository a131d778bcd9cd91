#pragma once

#include "lteu/errors.hpp"
#include "lteu/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace lteu {

inline constexpr std::string_view kVersion = "0.1.0";

namespace config_detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

// Thrown by value parsers; the caller attaches key and line.
struct BadValue
{
    std::string what;
};

inline double parse_double(std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw BadValue{"'" + std::string(v) + "' is not a finite number"};
    }
    return out;
}

template <class Int>
Int parse_int(std::string_view v)
{
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw BadValue{"'" + std::string(v) + "' is not an integer"};
    }
    return out;
}

inline bool parse_bool(std::string_view v)
{
    if (v == "true" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "off" || v == "0") {
        return false;
    }
    throw BadValue{"'" + std::string(v) + "' is not a boolean"};
}

inline void require(bool ok, const char* what)
{
    if (!ok) {
        throw BadValue{what};
    }
}

inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += fmt(items[i]);
    }
    return out;
}

inline std::string check_ratio(std::string_view v)
{
    require(v == "4:4" || v == "4:8" || v == "4:16", "ratio must be one of 4:4, 4:8, 4:16");
    return std::string(v);
}

inline ThroughputCase parse_case(std::string_view v)
{
    if (v == "ca") {
        return ThroughputCase::CA_only;
    }
    if (v == "dcsa") {
        return ThroughputCase::DC_SA;
    }
    throw BadValue{"case must be 'ca' or 'dcsa'"};
}

inline AllocationPolicy parse_policy(std::string_view v)
{
    if (v == "fixed") {
        return AllocationPolicy::fixed;
    }
    if (v == "flexible") {
        return AllocationPolicy::flexible;
    }
    throw BadValue{"policy must be 'fixed' or 'flexible'"};
}

inline std::string to_string(FixedModeSelection f)
{
    return f == FixedModeSelection::per_arrival ? "per_arrival" : "at_start";
}

template <class T, class F>
std::vector<T> parse_list(std::string_view v, F&& parse_one)
{
    std::vector<T> out;
    for (auto item : split(v, ',')) {
        require(!item.empty(), "empty list element");
        out.push_back(parse_one(item));
    }
    return out;
}

struct KeySpec
{
    std::string_view key;
    std::function<void(SimConfig&, std::string_view)> parse;
    std::function<std::string(const SimConfig&)> emit;
};

inline const std::vector<KeySpec>& key_table()
{
    static const std::vector<KeySpec> table{
        {"scenario.ratio", [](SimConfig& c, std::string_view v) { c.ratio = check_ratio(v); },
         [](const SimConfig& c) { return c.ratio; }},
        {"scenario.ue_per_node",
         [](SimConfig& c, std::string_view v) {
             c.ue_per_node = parse_int<int>(v);
             require(c.ue_per_node >= 0, "must be >= 0");
         },
         [](const SimConfig& c) { return std::to_string(c.ue_per_node); }},
        {"run.seed", [](SimConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>(v); },
         [](const SimConfig& c) { return std::to_string(c.seed); }},
        {"run.seeds",
         [](SimConfig& c, std::string_view v) {
             c.seeds = parse_int<int>(v);
             require(c.seeds >= 1, "must be >= 1");
         },
         [](const SimConfig& c) { return std::to_string(c.seeds); }},
        {"channel.shadowing_sigma_db",
         [](SimConfig& c, std::string_view v) {
             c.shadowing_sigma_db = parse_double(v);
             require(c.shadowing_sigma_db >= 0.0, "must be >= 0");
         },
         [](const SimConfig& c) { return format_double(c.shadowing_sigma_db); }},
        {"channel.penetration", [](SimConfig& c, std::string_view v) { c.penetration = parse_bool(v); },
         [](const SimConfig& c) { return std::string(c.penetration ? "true" : "false"); }},
        {"radio.tx_power_dbm", [](SimConfig& c, std::string_view v) { c.tx_power_dbm = parse_double(v); },
         [](const SimConfig& c) { return format_double(c.tx_power_dbm); }},
        {"radio.noise_figure_db",
         [](SimConfig& c, std::string_view v) {
             c.noise_figure_db = parse_double(v);
             require(c.noise_figure_db >= 0.0, "must be >= 0");
         },
         [](const SimConfig& c) { return format_double(c.noise_figure_db); }},
        {"radio.se_cap",
         [](SimConfig& c, std::string_view v) {
             c.se_cap = parse_double(v);
             require(c.se_cap > 0.0, "must be > 0");
         },
         [](const SimConfig& c) { return format_double(c.se_cap); }},
        {"radio.se_floor_db", [](SimConfig& c, std::string_view v) { c.se_floor_db = parse_double(v); },
         [](const SimConfig& c) { return format_double(c.se_floor_db); }},
        {"traffic.lambda",
         [](SimConfig& c, std::string_view v) {
             c.lambda = parse_double(v);
             require(c.lambda >= 0.0, "must be >= 0");
         },
         [](const SimConfig& c) { return format_double(c.lambda); }},
        {"traffic.lambda_scale",
         [](SimConfig& c, std::string_view v) {
             c.lambda_scale = parse_double(v);
             require(c.lambda_scale > 0.0, "must be > 0");
         },
         [](const SimConfig& c) { return format_double(c.lambda_scale); }},
        {"traffic.file_size_mbytes",
         [](SimConfig& c, std::string_view v) {
             c.file_size_mbytes = parse_double(v);
             require(c.file_size_mbytes > 0.0, "must be > 0");
         },
         [](const SimConfig& c) { return format_double(c.file_size_mbytes); }},
        {"engine.tti_ms",
         [](SimConfig& c, std::string_view v) {
             c.tti_ms = parse_double(v);
             require(c.tti_ms > 0.0, "must be > 0");
         },
         [](const SimConfig& c) { return format_double(c.tti_ms); }},
        {"engine.duration_s",
         [](SimConfig& c, std::string_view v) {
             c.duration_s = parse_double(v);
             require(c.duration_s >= 0.0, "must be >= 0");
         },
         [](const SimConfig& c) { return format_double(c.duration_s); }},
        {"policy.fixed_mode",
         [](SimConfig& c, std::string_view v) {
             if (v == "per_arrival") {
                 c.fixed_mode = FixedModeSelection::per_arrival;
             } else if (v == "at_start") {
                 c.fixed_mode = FixedModeSelection::at_start;
             } else {
                 throw BadValue{"must be 'per_arrival' or 'at_start'"};
             }
         },
         [](const SimConfig& c) { return to_string(c.fixed_mode); }},
        {"coverage.samples",
         [](SimConfig& c, std::string_view v) {
             c.coverage_samples = parse_int<int>(v);
             require(c.coverage_samples >= 1, "must be >= 1");
         },
         [](const SimConfig& c) { return std::to_string(c.coverage_samples); }},
        {"coverage.ratios",
         [](SimConfig& c, std::string_view v) { c.coverage_ratios = parse_list<std::string>(v, check_ratio); },
         [](const SimConfig& c) { return join(c.coverage_ratios, [](const std::string& s) { return s; }); }},
        {"throughput.cases",
         [](SimConfig& c, std::string_view v) { c.cases = parse_list<ThroughputCase>(v, parse_case); },
         [](const SimConfig& c) { return join(c.cases, [](ThroughputCase x) { return lteu::to_string(x); }); }},
        {"throughput.policies",
         [](SimConfig& c, std::string_view v) { c.policies = parse_list<AllocationPolicy>(v, parse_policy); },
         [](const SimConfig& c) { return join(c.policies, [](AllocationPolicy x) { return lteu::to_string(x); }); }},
        {"throughput.loads",
         [](SimConfig& c, std::string_view v) {
             c.loads = parse_list<double>(v, [](std::string_view s) {
                 const double x = parse_double(s);
                 require(x >= 0.0, "loads must be >= 0");
                 return x;
             });
         },
         [](const SimConfig& c) { return join(c.loads, format_double); }},
    };
    return table;
}

} // namespace config_detail

/// Applies one `key = value` assignment. Throws ConfigError naming the key.
inline void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value, int line = 0)
{
    const auto where = [&] {
        return (line > 0 ? "config line " + std::to_string(line) + ": " : std::string("config: ")) + "key '" +
               std::string(key) + "': ";
    };
    if (key.starts_with("manifest.")) {
        return; // provenance written by the CLI; not part of the run config
    }
    for (const auto& spec : config_detail::key_table()) {
        if (spec.key == key) {
            try {
                spec.parse(cfg, value);
            } catch (const config_detail::BadValue& e) {
                throw ConfigError(where() + e.what);
            }
            return;
        }
    }
    throw ConfigError(where() + "unknown key");
}

/// Parses flat `section.key = value` text. Blank lines and '#' comments are
/// ignored; absent keys keep their defaults.
inline SimConfig parse_config_text(std::string_view text)
{
    SimConfig cfg;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) {
            body = body.substr(0, hash);
        }
        body = config_detail::trim(body);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = config_detail::trim(body.substr(0, eq));
        const auto value = config_detail::trim(body.substr(eq + 1));
        apply_setting(cfg, key, value, line_no);
    }
    return cfg;
}

inline SimConfig parse_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Every config key, one `key = value` line each, in a fixed order.
inline std::string emit_config(const SimConfig& cfg)
{
    std::string out;
    for (const auto& spec : config_detail::key_table()) {
        out += std::string(spec.key) + " = " + spec.emit(cfg) + "\n";
    }
    return out;
}

} // namespace lteu
