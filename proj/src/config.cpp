#include "spdcpol/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

#include "spdcpol/errors.hpp"

namespace spdcpol {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view v, int line_no) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("line " + std::to_string(line_no) + ": non-numeric value '" +
                          std::string(v) + "'");
    }
    return out;
}

int parse_int(std::string_view v, int line_no) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("line " + std::to_string(line_no) + ": non-integer value '" +
                          std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view v, int line_no) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("line " + std::to_string(line_no) + ": expected true/false, got '" +
                      std::string(v) + "'");
}

// Shortest representation that round-trips exactly.
std::string number_repr(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

double max_allowed_dt(const ExperimentConfig& cfg) {
    double m = std::min(cfg.pump.sigma_p, cfg.crystal.DL);
    if (cfg.filter.enabled) m = std::min(m, cfg.filter.sigma_f);
    return m / 20.0;
}

std::pair<double, double> required_span(const ExperimentConfig& cfg) {
    const double sigma_eff = cfg.pump.sigma_p + (cfg.filter.enabled ? cfg.filter.sigma_f : 0.0);
    const double tau = std::abs(cfg.delay.effective_tau());
    const double lo = cfg.pump.t0 - 4.0 * sigma_eff - tau - cfg.crystal.tau_c;
    const double hi = cfg.pump.t0 + 4.0 * sigma_eff + cfg.crystal.DL + tau;
    return {lo, hi};
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> v;
    if (!(cfg.pump.sigma_p > 0.0)) v.push_back("sigma_p_fs must be positive");
    if (!(cfg.crystal.DL > 0.0)) v.push_back("DL_fs must be positive");
    if (!(cfg.crystal.r >= 0.0 && cfg.crystal.r <= 1.0)) v.push_back("r must be in [0, 1]");
    if (!(cfg.crystal.tau_c >= 0.0 && cfg.crystal.tau_c <= cfg.crystal.DL))
        v.push_back("tau_c_fs must be in [0, DL_fs]");
    if (cfg.filter.enabled && !(cfg.filter.sigma_f > 0.0))
        v.push_back("filter_sigma_fs must be positive when filter_enabled");
    if (!(cfg.grid.t_max > cfg.grid.t_min)) v.push_back("grid_tmax_fs must exceed grid_tmin_fs");
    if (cfg.grid.n < 64) v.push_back("grid_n must be at least 64");

    // Grid sizing rule, only meaningful once the pieces above are sane.
    if (cfg.pump.sigma_p > 0.0 && cfg.crystal.DL > 0.0 && cfg.grid.t_max > cfg.grid.t_min &&
        cfg.grid.n >= 64 && (!cfg.filter.enabled || cfg.filter.sigma_f > 0.0)) {
        if (cfg.grid.dt() > max_allowed_dt(cfg)) {
            v.push_back("grid step dt exceeds min(sigma_p_fs, DL_fs, filter_sigma_fs)/20");
        }
        const auto [lo, hi] = required_span(cfg);
        if (cfg.grid.t_min > lo || cfg.grid.t_max < hi) {
            v.push_back("grid [grid_tmin_fs, grid_tmax_fs] does not cover the required span [" +
                        number_repr(lo) + ", " + number_repr(hi) + "]");
        }
    }
    return v;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }

        if (key == "sigma_p_fs") cfg.pump.sigma_p = parse_number(val, line_no);
        else if (key == "t0_fs") cfg.pump.t0 = parse_number(val, line_no);
        else if (key == "DL_fs") cfg.crystal.DL = parse_number(val, line_no);
        else if (key == "r") cfg.crystal.r = parse_number(val, line_no);
        else if (key == "tau_c_fs") cfg.crystal.tau_c = parse_number(val, line_no);
        else if (key == "filter_sigma_fs") cfg.filter.sigma_f = parse_number(val, line_no);
        else if (key == "filter_enabled") cfg.filter.enabled = parse_bool(val, line_no);
        else if (key == "tau_fs") cfg.delay.tau = parse_number(val, line_no);
        else if (key == "delay_present") cfg.delay.present = parse_bool(val, line_no);
        else if (key == "grid_tmin_fs") cfg.grid.t_min = parse_number(val, line_no);
        else if (key == "grid_tmax_fs") cfg.grid.t_max = parse_number(val, line_no);
        else if (key == "grid_n") cfg.grid.n = parse_int(val, line_no);
        else if (key == "model") {
            if (val == "full") cfg.model = ModelKind::Full;
            else if (val == "truncated") cfg.model = ModelKind::Truncated;
            else
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": model must be full or truncated");
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(std::string_view text) {
    ExperimentConfig cfg = parse_config(text);
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& s : violations) msg += "\n  " + s;
        throw ConfigError(msg);
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "sigma_p_fs = " << number_repr(cfg.pump.sigma_p) << '\n'
        << "t0_fs = " << number_repr(cfg.pump.t0) << '\n'
        << "DL_fs = " << number_repr(cfg.crystal.DL) << '\n'
        << "r = " << number_repr(cfg.crystal.r) << '\n'
        << "tau_c_fs = " << number_repr(cfg.crystal.tau_c) << '\n'
        << "filter_sigma_fs = " << number_repr(cfg.filter.sigma_f) << '\n'
        << "filter_enabled = " << (cfg.filter.enabled ? "true" : "false") << '\n'
        << "tau_fs = " << number_repr(cfg.delay.tau) << '\n'
        << "delay_present = " << (cfg.delay.present ? "true" : "false") << '\n'
        << "grid_tmin_fs = " << number_repr(cfg.grid.t_min) << '\n'
        << "grid_tmax_fs = " << number_repr(cfg.grid.t_max) << '\n'
        << "grid_n = " << cfg.grid.n << '\n'
        << "model = " << (cfg.model == ModelKind::Full ? "full" : "truncated") << '\n';
    return out.str();
}

} // namespace spdcpol
