#include "spdcpol/csv.hpp"

#include <charconv>
#include <cmath>

namespace spdcpol {

std::string format_number(double v) {
    if (v == 0.0) return "0"; // covers -0 as well
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, ptr);
}

std::string curve_csv(const ModulationCurve& curve) {
    std::string out = "theta2_deg,rate\n";
    for (const CurvePoint& p : curve.points) {
        out += format_number(p.theta2_deg);
        out += ',';
        out += format_number(p.value);
        out += '\n';
    }
    return out;
}

std::string vismap_csv(const std::vector<VisibilityMapRow>& rows) {
    std::string out = "theta1_deg,V_full,V_truncated\n";
    for (const VisibilityMapRow& r : rows) {
        out += format_number(r.theta1_deg);
        out += ',';
        out += format_number(r.v_full);
        out += ',';
        out += format_number(r.v_truncated);
        out += '\n';
    }
    return out;
}

std::string tauscan_csv(const std::vector<std::pair<double, VisibilityResult>>& rows) {
    std::string out = "tau_fs,V,sigma_V\n";
    for (const auto& [tau, fit] : rows) {
        out += format_number(tau);
        out += ',';
        out += format_number(fit.visibility);
        out += ',';
        out += format_number(fit.sigma_v);
        out += '\n';
    }
    return out;
}

std::string fit_csv(const VisibilityResult& fit) {
    std::string out = "V,sigma_V,a0,a1,a2,residual_rms\n";
    out += format_number(fit.visibility);
    out += ',';
    out += format_number(fit.sigma_v);
    out += ',';
    out += format_number(fit.a0);
    out += ',';
    out += format_number(fit.a1);
    out += ',';
    out += format_number(fit.a2);
    out += ',';
    out += format_number(fit.residual_rms);
    out += '\n';
    return out;
}

std::string density_csv(const PolarizationDensityMatrix& rho) {
    std::string out = "XX,XY,YX,YY\n";
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            if (q) out += ',';
            out += format_number(rho.at(p, q).real());
            out += ',';
            out += format_number(rho.at(p, q).imag());
        }
        out += '\n';
    }
    return out;
}

std::string amplitude_csv(const BiphotonAmplitude& amp) {
    std::string out = "t_e,t_o,abs2\n";
    const int n = amp.grid.n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out += format_number(amp.grid.t(i));
            out += ',';
            out += format_number(amp.grid.t(j));
            out += ',';
            out += format_number(std::norm(amp.at(i, j)));
            out += '\n';
        }
    }
    return out;
}

} // namespace spdcpol
