#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "rach/io.hpp"

using namespace rach;
using io::KvConfig;

TEST_CASE("kv parsing: comments, blanks, trimming") {
    auto kv = KvConfig::parse_string(
        "# scenario\n"
        "N = 2000\n"
        "\n"
        "r_bar=50.0   # soft budget\n"
        "controller =  poca\n");
    CHECK(kv.get_int("N") == 2000);
    CHECK(kv.get_double("r_bar") == 50.0);
    CHECK(kv.get_string("controller") == std::string("poca"));
    kv.ensure_all_consumed();
}

TEST_CASE("kv parsing: malformed lines and duplicates") {
    CHECK_THROWS_AS(KvConfig::parse_string("novalue\n"), ConfigError);
    CHECK_THROWS_AS(KvConfig::parse_string("= 3\n"), ConfigError);
    CHECK_THROWS_AS(KvConfig::parse_string("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("unknown keys fail fast and are named") {
    auto kv = KvConfig::parse_string("N = 10\nreplciations = 5\n", "scenario.cfg");
    kv.get_int("N");
    try {
        kv.ensure_all_consumed();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("replciations") != std::string::npos);
        CHECK(msg.find("scenario.cfg") != std::string::npos);
    }
}

TEST_CASE("typed getters validate their input") {
    auto kv = KvConfig::parse_string("a = abc\nb = 1.5\nc = yes\n");
    CHECK_THROWS_AS(kv.get_double("a"), ConfigError);
    CHECK_THROWS_AS(kv.get_int("b"), ConfigError);
    CHECK_THROWS_AS(kv.get_bool("c"), ConfigError);
    CHECK(kv.get_string("a") == std::string("abc"));
}

TEST_CASE("bool parsing") {
    auto kv = KvConfig::parse_string("a = true\nb = 0\n");
    CHECK(kv.get_bool("a") == true);
    CHECK(kv.get_bool("b") == false);
}

TEST_CASE("scenario keys map onto ScenarioConfig") {
    auto kv = KvConfig::parse_string(
        "N = 2000\nwindow_ms = 10\nperiod_ms = 5\nr_idle = 0.09\nr_occupied = 1.09\n"
        "r_bar = 50\ngranularity = 1\ncontroller = duan16d\nm_fixed = 54\nseed = 99\n"
        "replications = 7\narrival_profile = beta\nestimator = perfect\nround_cap = 500\n"
        "initial_estimate = 3\ncredit_arrivals = false\n");
    sim::ScenarioConfig cfg;
    io::apply_scenario_keys(kv, cfg);
    kv.ensure_all_consumed();
    CHECK(cfg.N == 2000);
    CHECK(cfg.controller.kind == sim::ControllerKind::Duan16Dynamic);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.replications == 7);
    CHECK(cfg.profile == sim::ArrivalProfile::Beta);
    CHECK(cfg.estimator == sim::EstimatorKind::Perfect);
    CHECK(cfg.round_cap == 500);
    CHECK(cfg.initial_estimate == 3.0);
    CHECK(cfg.credit_arrivals == false);
    cfg.validate();
}

TEST_CASE("fmt: shortest round-trip doubles") {
    CHECK(io::fmt(0.135) == "0.135");
    CHECK(io::fmt(1.0) == "1");
    CHECK(io::fmt(50.0) == "50");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(io::fmt(v)) == v);
}

TEST_CASE("csv header: schema first, timestamp excludable") {
    std::ostringstream with, without;
    io::write_csv_header(with, "rach.test.v1", true);
    io::write_csv_header(without, "rach.test.v1", false);
    CHECK(without.str() == "# schema: rach.test.v1\n");
    CHECK(with.str().substr(0, 22) == "# schema: rach.test.v1");
    CHECK(with.str().find("# generated: ") != std::string::npos);
}
