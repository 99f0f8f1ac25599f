#include "rach/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rach::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

KvConfig KvConfig::parse_string(std::string_view text, std::string_view origin) {
    KvConfig kv;
    kv.origin_ = std::string(origin);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(kv.origin_ + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + std::string(line) + "'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty())
            throw ConfigError(kv.origin_ + ":" + std::to_string(line_no) + ": empty key");
        if (kv.values_.count(key))
            throw ConfigError(kv.origin_ + ":" + std::to_string(line_no) + ": duplicate key '" +
                              key + "'");
        kv.values_[key] = value;
    }
    return kv;
}

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool KvConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::optional<std::string> KvConfig::get_string(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    consumed_.insert(key);
    return it->second;
}

std::optional<double> KvConfig::get_double(const std::string& key) {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || ptr != s->data() + s->size())
        throw ConfigError(origin_ + ": key '" + key + "': expected a number, got '" + *s + "'");
    return v;
}

std::optional<std::int64_t> KvConfig::get_int(const std::string& key) {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || ptr != s->data() + s->size())
        throw ConfigError(origin_ + ": key '" + key + "': expected an integer, got '" + *s + "'");
    return v;
}

std::optional<std::uint64_t> KvConfig::get_uint(const std::string& key) {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || ptr != s->data() + s->size())
        throw ConfigError(origin_ + ": key '" + key + "': expected an unsigned integer, got '" +
                          *s + "'");
    return v;
}

std::optional<bool> KvConfig::get_bool(const std::string& key) {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1") return true;
    if (*s == "false" || *s == "0") return false;
    throw ConfigError(origin_ + ": key '" + key + "': expected true|false, got '" + *s + "'");
}

void KvConfig::ensure_all_consumed() const {
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key))
            throw ConfigError(origin_ + ": unknown key '" + key + "'");
    }
}

void apply_scenario_keys(KvConfig& kv, sim::ScenarioConfig& cfg) {
    if (const auto v = kv.get_int("N")) cfg.N = static_cast<int>(*v);
    if (const auto v = kv.get_double("window_ms")) cfg.activation_window_ms = *v;
    if (const auto v = kv.get_double("period_ms")) cfg.round_period_ms = *v;
    if (const auto v = kv.get_double("r_idle")) cfg.costs.idle = *v;
    if (const auto v = kv.get_double("r_occupied")) cfg.costs.occupied = *v;
    if (const auto v = kv.get_double("r_bar")) cfg.budget.r_bar = *v;
    if (const auto v = kv.get_int("granularity")) cfg.budget.granularity = static_cast<int>(*v);
    if (const auto v = kv.get_string("controller"))
        cfg.controller.kind = sim::controller_from_name(*v);
    if (const auto v = kv.get_int("m_fixed")) cfg.controller.fixed_M = static_cast<int>(*v);
    if (const auto v = kv.get_uint("seed")) cfg.master_seed = *v;
    if (const auto v = kv.get_int("replications")) cfg.replications = static_cast<int>(*v);
    if (const auto v = kv.get_string("arrival_profile"))
        cfg.profile = sim::profile_from_name(*v);
    if (const auto v = kv.get_string("estimator")) cfg.estimator = sim::estimator_from_name(*v);
    if (const auto v = kv.get_int("round_cap")) cfg.round_cap = *v;
    if (const auto v = kv.get_double("initial_estimate")) cfg.initial_estimate = *v;
    if (const auto v = kv.get_bool("credit_arrivals")) cfg.credit_arrivals = *v;
}

std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }

void write_csv_header(std::ostream& os, std::string_view schema, bool stamp) {
    os << "# schema: " << schema << "\n";
    if (stamp) {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[80];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                      tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
        os << "# generated: " << buf << "\n";
    }
}

}  // namespace rach::io
