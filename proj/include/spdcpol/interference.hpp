#pragma once

#include <array>

#include "spdcpol/amplitude.hpp"

namespace spdcpol {

/// The four polarization-component detection amplitudes over (t1, t2), index
/// order (detector-1 axis, detector-2 axis). With tau the X-Y delay:
///
///   Psi_XX =   A(t1, t2)         + A(t2, t1)
///   Psi_YY = -[A(t1+tau, t2+tau) + A(t2+tau, t1+tau)]
///   Psi_XY =   A(t1, t2+tau)     - A(t2+tau, t1)
///   Psi_YX = -[A(t1+tau, t2)     - A(t2, t1+tau)]
///
/// At tau = 0 these collapse pairwise: Psi_YY = -Psi_XX, Psi_YX = -Psi_XY.
struct ComponentAmplitudes {
    TimeGrid grid;
    double tau = 0.0;
    std::vector<Complex> xx, xy, yx, yy;
};

/// Complex field sampled on the detection-time grid.
struct ComplexField {
    TimeGrid grid;
    std::vector<Complex> values;
};

/// 4x4 Hermitian unit-trace matrix in the basis (XX, XY, YX, YY).
struct PolarizationDensityMatrix {
    std::array<Complex, 16> m{};

    Complex& at(int p, int q) { return m[static_cast<std::size_t>(p) * 4 + q]; }
    const Complex& at(int p, int q) const { return m[static_cast<std::size_t>(p) * 4 + q]; }
};

/// Non-negative coincidence rate; units are arbitrary but consistent within
/// one configuration. Tiny negative rounding residue is clamped to zero.
struct RateValue {
    double value = 0.0;
};

ComponentAmplitudes component_amplitudes(const BiphotonAmplitude& amp,
                                         const DelayElement& delay);

/// Detection amplitude behind the analyzers. With cj = cos(pi/4 - theta_j),
/// sj = sin(pi/4 - theta_j):
///   Full:      (1/2) [c1 c2 Psi_XX + c1 s2 Psi_XY + s1 c2 Psi_YX + s1 s2 Psi_YY]
///   Truncated: (1/2) [c1 c2 Psi_XX + s1 s2 Psi_YY]
ComplexField detection_amplitude(const ComponentAmplitudes& comp, const AnalyzerPair& angles,
                                 ModelKind model);

/// Trapezoidal integral of |detection amplitude|^2, streamed without
/// materializing the field.
RateValue coincidence_rate(const ComponentAmplitudes& comp, const AnalyzerPair& angles,
                           ModelKind model);

RateValue coincidence_rate(const BiphotonAmplitude& amp, const AnalyzerPair& angles,
                           const DelayElement& delay, ModelKind model);

/// Rate of the physical setup with no delay element,
/// R = integral |sin(t1) cos(t2) A(t1,t2) + cos(t1) sin(t2) A(t2,t1)|^2,
/// computed directly from the amplitude (independent of the component path).
RateValue rate_no_delay(const BiphotonAmplitude& amp, const AnalyzerPair& angles);

/// Closed-form tau = 0 full-model rate for a given norm N and overlap O:
/// R = N [sin^2 t1 cos^2 t2 + cos^2 t1 sin^2 t2 + 2 Re(O) sin t1 cos t1 sin t2 cos t2].
RateValue mixture_law_rate(double norm, Complex overlap, const AnalyzerPair& angles);

/// Reduced polarization density matrix: rho_pq = G_pq / tr G with
/// G_pq = integral Psi_p conj(Psi_q). Throws NumericalError on zero trace.
PolarizationDensityMatrix density_matrix(const ComponentAmplitudes& comp);

/// Normalized rate <v|rho|v> with v = (c1 c2, c1 s2, s1 c2, s1 s2).
RateValue rate_from_rho(const PolarizationDensityMatrix& rho, const AnalyzerPair& angles);

/// Fidelity <Phi|rho|Phi> with |Phi> = (|XX> - |YY>)/sqrt(2).
double bell_fidelity(const PolarizationDensityMatrix& rho);

} // namespace spdcpol
