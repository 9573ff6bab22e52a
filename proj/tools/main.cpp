// Command-line front end: configuration-driven scans, fits and density-matrix
// dumps as CSV for external plotting.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spdcpol/amplitude.hpp"
#include "spdcpol/analysis.hpp"
#include "spdcpol/csv.hpp"
#include "spdcpol/errors.hpp"
#include "spdcpol/interference.hpp"

namespace {

using namespace spdcpol;

std::string read_file(const std::string& path, const char* what) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError(std::string(what) + ": cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExperimentConfig config_from_arg(const std::string& arg) {
    if (arg == "default") return ExperimentConfig{};
    std::string text;
    try {
        text = read_file(arg, "config");
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return load_config(text);
}

// Atomic-ish output: write to a temporary and rename, so a failed run never
// leaves a partial file. Empty path means stdout.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ConfigError("cannot open '" + tmp + "' for writing");
        f << content;
        f.flush();
        if (!f) {
            f.close();
            std::remove(tmp.c_str());
            throw ConfigError("failed writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("cannot move output into place at '" + path + "'");
    }
}

std::vector<double> parse_tau_range(const std::string& range) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || !(step > 0.0) ||
        hi < lo) {
        throw ConfigError("--tau-range expects min:max:step with step > 0");
    }
    std::vector<double> taus;
    for (double t = lo; t <= hi + 0.5 * step; t += step) taus.push_back(t);
    return taus;
}

void emit_figure1_bundle(const ExperimentConfig& cfg, const std::string& outdir) {
    struct Panel {
        const char* file;
        double theta1;
        bool delay_present;
    };
    const Panel panels[4] = {{"fig1a.csv", 90.0, true},
                             {"fig1b.csv", 45.0, true},
                             {"fig1c.csv", 90.0, false},
                             {"fig1d.csv", 45.0, false}};
    for (const Panel& p : panels) {
        ExperimentConfig panel_cfg = cfg;
        panel_cfg.delay = DelayElement{0.0, p.delay_present};
        const ModulationCurve curve = scan_theta2(panel_cfg, p.theta1, default_theta2_grid());
        write_output(outdir + "/" + p.file, curve_csv(curve));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarization-correlation simulator for femtosecond-pumped type-II SPDC"};
    app.require_subcommand(1);

    std::string config_arg = "default";
    std::string output;
    std::uint64_t seed = 1;
    app.add_option("--config", config_arg, "Config file path, or 'default'");
    app.add_option("--output", output, "Output file (default: stdout)");
    app.add_option("--seed", seed, "Seed for synthetic-count generation");

    double theta1 = 0.0;
    std::string model_override;
    auto* scan_theta = app.add_subcommand("scan-theta", "Rate vs theta2 at fixed theta1");
    scan_theta->add_option("--theta1", theta1, "Analyzer 1 angle, degrees")->required();
    scan_theta->add_option("--model", model_override, "Override model: full|truncated");

    std::vector<double> theta1_list;
    auto* vis_map = app.add_subcommand("visibility-map", "V_full/V_truncated vs theta1");
    vis_map->add_option("--theta1", theta1_list, "theta1 list, degrees (default 0..90 step 15)");

    auto* compare = app.add_subcommand("compare-models", "Visibility table for both models");
    compare->add_option("--theta1", theta1_list, "theta1 list, degrees")->required();

    double tau_theta1 = 0.0;
    std::vector<double> tau_list;
    std::string tau_range;
    auto* scan_tau_cmd = app.add_subcommand("scan-tau", "Visibility vs X-Y delay");
    scan_tau_cmd->add_option("--theta1", tau_theta1, "Analyzer 1 angle, degrees")->required();
    auto* tau_opt = scan_tau_cmd->add_option("--tau", tau_list, "Delay values, fs");
    scan_tau_cmd->add_option("--tau-range", tau_range, "min:max:step, fs")->excludes(tau_opt);

    auto* density = app.add_subcommand("density-matrix", "Reduced polarization density matrix");

    std::string fit_input;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a measured counts CSV");
    fit_cmd->add_option("--input", fit_input, "CSV with header theta2_deg,counts[,sigma]")
        ->required();

    auto* validate_cmd = app.add_subcommand("validate", "Check the configuration");

    std::string fig1_outdir;
    auto* fig1 = app.add_subcommand("fig1", "Four-panel modulation bundle (fig1a..fig1d.csv)");
    fig1->add_option("--outdir", fig1_outdir, "Output directory")->required();

    auto* dump = app.add_subcommand("dump-amplitude", "Debug dump of |A|^2 on the grid");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate_cmd->parsed()) {
            ExperimentConfig cfg = config_arg == "default" ? ExperimentConfig{}
                                                           : parse_config(read_file(config_arg, "config"));
            const auto violations = validate_config(cfg);
            if (violations.empty()) {
                std::cout << "ok\n";
                return 0;
            }
            for (const auto& v : violations) std::cerr << v << '\n';
            return 2;
        }

        const ExperimentConfig cfg = config_from_arg(config_arg);

        if (scan_theta->parsed()) {
            ExperimentConfig run_cfg = cfg;
            if (!model_override.empty()) {
                if (model_override == "full") run_cfg.model = ModelKind::Full;
                else if (model_override == "truncated") run_cfg.model = ModelKind::Truncated;
                else throw ConfigError("--model must be full or truncated");
            }
            const ModulationCurve curve = scan_theta2(run_cfg, theta1, default_theta2_grid());
            write_output(output, curve_csv(curve));
        } else if (vis_map->parsed() || compare->parsed()) {
            if (theta1_list.empty()) theta1_list = {0, 15, 30, 45, 60, 75, 90};
            write_output(output, vismap_csv(visibility_map(cfg, theta1_list)));
        } else if (scan_tau_cmd->parsed()) {
            if (!tau_range.empty()) tau_list = parse_tau_range(tau_range);
            if (tau_list.empty()) throw ConfigError("scan-tau requires --tau or --tau-range");
            write_output(output, tauscan_csv(scan_tau(cfg, tau_theta1, tau_list)));
        } else if (density->parsed()) {
            const BiphotonAmplitude amp = make_amplitude(cfg);
            const PolarizationDensityMatrix rho =
                density_matrix(component_amplitudes(amp, cfg.delay));
            write_output(output, density_csv(rho));
        } else if (fit_cmd->parsed()) {
            const ModulationCurve curve = ingest_counts_csv(read_file(fit_input, "fit input"));
            write_output(output, fit_csv(fit_modulation(curve)));
        } else if (fig1->parsed()) {
            emit_figure1_bundle(cfg, fig1_outdir);
        } else if (dump->parsed()) {
            write_output(output, amplitude_csv(make_amplitude(cfg)));
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
