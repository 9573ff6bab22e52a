#include <doctest.h>

#include <cmath>
#include <string>

#include "spdcpol/config.hpp"
#include "spdcpol/errors.hpp"

using namespace spdcpol;

namespace {

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.pump.sigma_p == b.pump.sigma_p && a.pump.t0 == b.pump.t0 &&
           a.crystal.DL == b.crystal.DL && a.crystal.r == b.crystal.r &&
           a.crystal.tau_c == b.crystal.tau_c && a.filter.sigma_f == b.filter.sigma_f &&
           a.filter.enabled == b.filter.enabled && a.delay.tau == b.delay.tau &&
           a.delay.present == b.delay.present && a.grid.t_min == b.grid.t_min &&
           a.grid.t_max == b.grid.t_max && a.grid.n == b.grid.n && a.model == b.model;
}

bool mentions(const std::exception& e, const char* needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("load_config maps keys onto fields and keeps defaults elsewhere") {
    const ExperimentConfig cfg = load_config("sigma_p_fs = 60\nDL_fs = 600");
    CHECK(cfg.pump.sigma_p == 60.0);
    CHECK(cfg.crystal.DL == 600.0);
    const ExperimentConfig defaults;
    CHECK(cfg.crystal.r == defaults.crystal.r);
    CHECK(cfg.grid.n == defaults.grid.n);
    CHECK(cfg.model == ModelKind::Full);
}

TEST_CASE("load_config rejects invariant violations, naming the key") {
    try {
        load_config("DL_fs = -5");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "DL_fs"));
    }
}

TEST_CASE("empty document yields the documented defaults") {
    CHECK(config_equal(load_config(""), ExperimentConfig{}));
}

TEST_CASE("parse errors: malformed line, unknown key, non-numeric value") {
    CHECK_THROWS_AS(parse_config("sigma_p_fs 60"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma_q_fs = 60"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma_p_fs = sixty"), ConfigError);
    CHECK_THROWS_AS(parse_config("filter_enabled = yes"), ConfigError);
    CHECK_THROWS_AS(parse_config("model = both"), ConfigError);

    try {
        parse_config("sigma_p_fs = 60\nDL_fs = abc\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "line 2"));
    }
}

TEST_CASE("comments and blank lines are ignored") {
    const ExperimentConfig cfg = load_config("# a comment\n\nsigma_p_fs = 80  # trailing\n");
    CHECK(cfg.pump.sigma_p == 80.0);
}

TEST_CASE("validate_config: defaults are valid") {
    CHECK(validate_config(ExperimentConfig{}).empty());
}

TEST_CASE("validate_config: grid step rule") {
    ExperimentConfig cfg;
    cfg.grid.n = 512; // dt ~ 7 fs > sigma_p/20
    const auto v = validate_config(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("dt") != std::string::npos);
}

TEST_CASE("validate_config: tau_c range") {
    ExperimentConfig cfg;
    cfg.crystal.tau_c = cfg.crystal.DL + 1.0;
    const auto v = validate_config(cfg);
    REQUIRE(!v.empty());
    CHECK(v[0].find("tau_c_fs") != std::string::npos);
}

TEST_CASE("validate_config: span rule reacts to delay and filter") {
    ExperimentConfig cfg;
    cfg.delay.tau = 5000.0; // pushes the required span outside the grid
    CHECK(!validate_config(cfg).empty());
    cfg.delay.present = false; // tau ignored when the element is absent
    CHECK(validate_config(cfg).empty());

    cfg = ExperimentConfig{};
    cfg.filter.enabled = true;
    cfg.filter.sigma_f = 800.0; // sigma_eff grows past the default span
    CHECK(!validate_config(cfg).empty());
}

TEST_CASE("serialize/load round-trip is field-wise exact") {
    ExperimentConfig cfg;
    cfg.pump.sigma_p = 61.7;
    cfg.pump.t0 = -3.25;
    cfg.crystal.DL = 612.0;
    cfg.crystal.r = 1.0 / 3.0;
    cfg.crystal.tau_c = 100.0 / 7.0;
    cfg.filter.enabled = true;
    cfg.filter.sigma_f = 123.456;
    cfg.delay.tau = -17.5;
    cfg.delay.present = false;
    cfg.grid.t_min = -2000.0;
    cfg.grid.t_max = 2500.0;
    cfg.grid.n = 2047;
    cfg.model = ModelKind::Truncated;

    CHECK(config_equal(load_config(serialize_config(cfg)), cfg));
    CHECK(config_equal(load_config(serialize_config(ExperimentConfig{})), ExperimentConfig{}));
}

TEST_CASE("analyzer angles reduce modulo 180 with identical projections") {
    for (double theta : {-170.0, -45.0, 0.0, 12.5, 90.0, 135.0, 179.0, 233.0}) {
        const AnalyzerPair a(theta, 0.0);
        const AnalyzerPair b(theta + 180.0, 0.0);
        CHECK(a.theta1_deg == doctest::Approx(b.theta1_deg).epsilon(1e-15));
        CHECK(a.x1() == doctest::Approx(b.x1()).epsilon(1e-15));
        CHECK(a.y1() == doctest::Approx(b.y1()).epsilon(1e-15));
        CHECK(a.theta1_deg >= 0.0);
        CHECK(a.theta1_deg < 180.0);
    }
}

TEST_CASE("projection convention: X at +45, Y at -45, measured from V") {
    const AnalyzerPair pair(45.0, -45.0);
    CHECK(pair.x1() == doctest::Approx(1.0)); // analyzer along X
    CHECK(pair.y1() == doctest::Approx(0.0));
    // -45 deg stores as 135 deg; the Y projection flips sign, which is the
    // allowed overall-sign freedom and leaves every rate unchanged.
    CHECK(pair.x2() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(pair.y2()) == doctest::Approx(1.0));
}
