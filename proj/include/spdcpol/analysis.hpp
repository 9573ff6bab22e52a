#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "spdcpol/interference.hpp"

namespace spdcpol {

enum class CurveKind { Simulated, Measured };

struct CurvePoint {
    double theta2_deg = 0.0;
    double value = 0.0;              ///< rate or counts
    std::optional<double> sigma;     ///< standard error, when known
};

/// Coincidence rate (or counts) vs analyzer angle theta2 at fixed theta1.
struct ModulationCurve {
    double theta1_deg = 0.0;
    std::vector<CurvePoint> points;
    CurveKind kind = CurveKind::Simulated;
};

/// Least-squares fit of value ~ a0 + a1 cos(2 theta2) + a2 sin(2 theta2).
struct VisibilityResult {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double visibility = 0.0;   ///< sqrt(a1^2 + a2^2) / a0, reported unclamped
    double sigma_v = 0.0;      ///< 0 for unweighted (noiseless) fits
    double residual_rms = 0.0;
    bool exceeds_unity = false; ///< flags visibility > 1 instead of truncating
};

/// Default theta2 sampling: 41 points, 0..180 deg inclusive (4.5 deg step).
std::vector<double> default_theta2_grid();

/// Coincidence-rate curve at fixed theta1 over the given theta2 list, using
/// cfg.model and cfg.delay.
ModulationCurve scan_theta2(const ExperimentConfig& cfg, double theta1_deg,
                            const std::vector<double>& theta2_deg);

/// For each tau, fit the theta2 modulation (default 41-point grid) and
/// report the visibility.
std::vector<std::pair<double, VisibilityResult>> scan_tau(const ExperimentConfig& cfg,
                                                          double theta1_deg,
                                                          const std::vector<double>& tau_fs);

/// Closed-form normal-equation fit in the basis {1, cos 2theta, sin 2theta};
/// weighted by 1/sigma^2 iff every point carries sigma. Throws DataError on
/// fewer than 5 points, singular design or non-positive fitted offset.
VisibilityResult fit_modulation(const ModulationCurve& curve);

struct VisibilityMapRow {
    double theta1_deg = 0.0;
    double v_full = 0.0;
    double v_truncated = 0.0;
};

/// Per theta1, visibility of the theta2 modulation under both models at the
/// config's delay.
std::vector<VisibilityMapRow> visibility_map(const ExperimentConfig& cfg,
                                             const std::vector<double>& theta1_deg);

/// SplitMix64 stream. Point k of a synthetic curve draws from an independent
/// stream seeded with mix64(seed ^ mix64(k + 1)), where mix64 is the
/// SplitMix64 finalizer, so counts are reproducible per (seed, point index)
/// regardless of evaluation order.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1].
    double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

/// Poisson variate. Knuth's product-of-uniforms inversion for mean < 30,
/// Hormann's PTRS transformed rejection for mean >= 30; both consume only
/// SplitMix64 uniforms, so results are reproducible across implementations
/// given the seed scheme above.
long long poisson_variate(double mean, SplitMix64& rng);

/// Poisson counts with mean proportional to the curve values (maximum maps
/// to n_peak) and sigma = sqrt(max(count, 1)); deterministic per seed.
ModulationCurve synth_counts(const ModulationCurve& curve, double n_peak, std::uint64_t seed);

/// Parse a measured curve from CSV (header theta2_deg,counts[,sigma]).
/// Missing sigma is filled with sqrt(max(count, 1)). Throws DataError naming
/// the offending line.
ModulationCurve ingest_counts_csv(std::string_view text);

} // namespace spdcpol
