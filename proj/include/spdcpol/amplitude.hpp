#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "spdcpol/config.hpp"

namespace spdcpol {

using Complex = std::complex<double>;

/// Closed-form two-photon wavepacket for a pulsed type-II source,
///
///   A(t_e, t_o) = E_p(t_e - r*delta) * strip(delta),   delta = t_o + tau_c - t_e,
///
/// where strip is 1 on (0, DL] and 0 elsewhere. Compensation tau_c shifts the
/// o-photon time argument. Real-valued baseband envelope (carrier phase
/// dropped).
struct AnalyticAmplitude {
    PumpPulse pump;
    Crystal crystal;

    double operator()(double t_e, double t_o) const {
        const double delta = t_o + crystal.tau_c - t_e;
        if (!(delta > 0.0 && delta <= crystal.DL)) return 0.0;
        return pump.envelope(t_e - crystal.r * delta);
    }
};

/// Two-photon amplitude sampled on a uniform square grid.
/// values[i*n + j] = A(t_i, t_j); the first argument (row) is the e-ray/V
/// photon time, the second (column) the o-ray/H photon time. The analytic
/// generator is retained for unfiltered point evaluation and dropped by
/// filtering.
struct BiphotonAmplitude {
    TimeGrid grid;
    std::vector<Complex> values;
    std::optional<AnalyticAmplitude> analytic;

    Complex at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n + j]; }

    /// Point evaluation at arbitrary times: analytic generator when
    /// available, otherwise bilinear interpolation on the grid (zero outside).
    Complex eval(double t1, double t2) const;

    /// Grid-only transpose A(t2, t1); drops the analytic generator.
    BiphotonAmplitude transposed() const;
};

struct OverlapResult {
    Complex value;  ///< normalized transpose overlap O
    double norm;    ///< integral of |A|^2 over the grid
};

/// Sample the analytic amplitude on the grid. Throws NumericalError if the
/// grid violates the sizing rule (dt too coarse, or span not covering the
/// pump envelope plus strip).
BiphotonAmplitude build_amplitude(const PumpPulse& pump, const Crystal& crystal,
                                  const TimeGrid& grid);

/// Convolve the amplitude along each time axis with a unit-sum Gaussian
/// kernel of width filter.sigma_f. Calling with a disabled filter is a
/// contract error (std::invalid_argument); the identity is the caller's
/// responsibility. The result is grid-sampled only.
BiphotonAmplitude apply_filters(const BiphotonAmplitude& amp, const FilterSpec& filter);

/// Trapezoidal integral of |A|^2 over the grid. Throws NumericalError when
/// the amplitude is identically zero on the grid.
double norm(const BiphotonAmplitude& amp);

/// Normalized transpose overlap O = (integral of A(t1,t2) * conj(A(t2,t1)))
/// / norm. |O| <= 1 up to quadrature error (Cauchy-Schwarz).
OverlapResult overlap(const BiphotonAmplitude& amp);

/// build_amplitude from a validated config, applying the filter if enabled.
/// Throws ConfigError when validate_config reports violations.
BiphotonAmplitude make_amplitude(const ExperimentConfig& cfg);

} // namespace spdcpol
