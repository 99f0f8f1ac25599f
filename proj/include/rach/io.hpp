#pragma once

// Flat key-value scenario files, strict-parsed (unknown keys are errors),
// plus deterministic CSV formatting helpers. CSV files start with a
// versioned schema comment and an optional timestamp comment; apart from the
// timestamp line, output is byte-identical across runs for the same inputs.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "rach/simulator.hpp"
#include "rach/types.hpp"

namespace rach::io {

class KvConfig {
public:
    KvConfig() = default;

    /// Parse "key = value" lines; '#' starts a comment; blank lines ignored.
    static KvConfig parse_string(std::string_view text, std::string_view origin = "<string>");
    static KvConfig parse_file(const std::string& path);

    bool has(const std::string& key) const;
    std::optional<std::string> get_string(const std::string& key);
    std::optional<double> get_double(const std::string& key);
    std::optional<std::int64_t> get_int(const std::string& key);
    std::optional<std::uint64_t> get_uint(const std::string& key);
    std::optional<bool> get_bool(const std::string& key);

    /// Throws ConfigError naming the first key nobody consumed.
    void ensure_all_consumed() const;

    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
    std::string origin_;
};

/// Apply scenario keys (N, window_ms, period_ms, r_idle, r_occupied, r_bar,
/// granularity, controller, m_fixed, seed, replications, arrival_profile,
/// estimator, round_cap, initial_estimate, credit_arrivals) onto cfg.
void apply_scenario_keys(KvConfig& kv, sim::ScenarioConfig& cfg);

/// Shortest round-trip decimal representation (locale-free, deterministic).
std::string fmt(double v);
std::string fmt(std::int64_t v);

/// "# schema: <name>" plus, when stamp is true, "# generated: <RFC3339 UTC>".
void write_csv_header(std::ostream& os, std::string_view schema, bool stamp);

}  // namespace rach::io
