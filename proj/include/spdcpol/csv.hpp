#pragma once

#include <string>

#include "spdcpol/analysis.hpp"

namespace spdcpol {

/// 12 significant digits, '.' decimal, locale-independent.
std::string format_number(double v);

/// theta2_deg,rate
std::string curve_csv(const ModulationCurve& curve);

/// theta1_deg,V_full,V_truncated
std::string vismap_csv(const std::vector<VisibilityMapRow>& rows);

/// tau_fs,V,sigma_V
std::string tauscan_csv(const std::vector<std::pair<double, VisibilityResult>>& rows);

/// V,sigma_V,a0,a1,a2,residual_rms (single row)
std::string fit_csv(const VisibilityResult& fit);

/// Basis labels header, then 4 rows of re,im pairs in basis order XX,XY,YX,YY.
std::string density_csv(const PolarizationDensityMatrix& rho);

/// t_e,t_o,abs2 debug dump of |A|^2.
std::string amplitude_csv(const BiphotonAmplitude& amp);

} // namespace spdcpol
