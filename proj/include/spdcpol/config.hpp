#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace spdcpol {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

/// Reduce an analyzer angle to [0, 180) degrees.
inline double reduce_angle_deg(double deg) {
    double a = std::fmod(deg, 180.0);
    if (a < 0.0) a += 180.0;
    return a;
}

/// Gaussian pump envelope, unit peak at t0. Times in femtoseconds throughout.
struct PumpPulse {
    double sigma_p = 60.0; ///< envelope width, E_p(t) = exp(-(t-t0)^2 / (2 sigma_p^2))
    double t0 = 0.0;       ///< envelope center

    double envelope(double t) const {
        const double u = (t - t0) / sigma_p;
        return std::exp(-0.5 * u * u);
    }
};

/// Type-II crystal parameters in the time domain.
struct Crystal {
    double DL = 600.0;  ///< total e/o group-delay difference D*L across the crystal
    double r = 0.5;     ///< pump-walkoff ratio weighting the envelope argument, in [0, 1]
    double tau_c = 0.0; ///< longitudinal compensation delay, in [0, DL]; 0 = uncompensated
};

/// Per-arm Gaussian spectral filter, expressed as a time-domain response width.
struct FilterSpec {
    double sigma_f = 100.0; ///< time-domain response width of the amplitude kernel
    bool enabled = false;   ///< disabled filter is the identity
};

/// Birefringent X-Y delay element; tau is applied to the Y (-45 deg) axis.
struct DelayElement {
    double tau = 0.0;    ///< X-Y delay; ignored when not present
    bool present = true;

    double effective_tau() const { return present ? tau : 0.0; }
};

/// Analyzer angles in degrees measured from the V axis (0 = V, 90 = H, 45 = X,
/// -45 = Y), stored reduced modulo 180. Projections onto the X/Y basis are
/// x(theta) = cos(pi/4 - theta), y(theta) = sin(pi/4 - theta).
struct AnalyzerPair {
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;

    AnalyzerPair() = default;
    AnalyzerPair(double t1_deg, double t2_deg)
        : theta1_deg(reduce_angle_deg(t1_deg)), theta2_deg(reduce_angle_deg(t2_deg)) {}

    double x1() const { return std::cos(kPi / 4.0 - deg_to_rad(theta1_deg)); }
    double y1() const { return std::sin(kPi / 4.0 - deg_to_rad(theta1_deg)); }
    double x2() const { return std::cos(kPi / 4.0 - deg_to_rad(theta2_deg)); }
    double y2() const { return std::sin(kPi / 4.0 - deg_to_rad(theta2_deg)); }
};

/// Uniform square detection-time grid; both axes share [t_min, t_max] with n
/// points.
struct TimeGrid {
    double t_min = -1500.0;
    double t_max = 2100.0;
    int n = 1201;

    double dt() const { return (t_max - t_min) / (n - 1); }
    double t(int i) const { return t_min + i * dt(); }
    /// Trapezoidal endpoint weight along one axis.
    double weight(int i) const { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }
    std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
};

/// Full detection model (all four polarization components) or the truncated
/// XX+YY model it corrects.
enum class ModelKind { Full, Truncated };

/// Single source of truth for one simulation run.
struct ExperimentConfig {
    PumpPulse pump;
    Crystal crystal;
    FilterSpec filter;
    DelayElement delay;
    TimeGrid grid;
    ModelKind model = ModelKind::Full;
};

/// Largest grid step the sizing rule allows for this configuration.
double max_allowed_dt(const ExperimentConfig& cfg);

/// Time span the sizing rule requires the grid to cover, as {lo, hi}.
std::pair<double, double> required_span(const ExperimentConfig& cfg);

/// Every violated invariant, one human-readable line each, naming the
/// offending key. Empty means the configuration is usable.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Parse a key = value document without validating. Throws ConfigError on
/// malformed lines, unknown keys and non-numeric values.
ExperimentConfig parse_config(std::string_view text);

/// parse_config followed by validate_config; throws ConfigError if any
/// invariant is violated.
ExperimentConfig load_config(std::string_view text);

/// Emit a document that load_config reads back to a field-wise equal config.
std::string serialize_config(const ExperimentConfig& cfg);

} // namespace spdcpol
