// Test-side oracles, kept independent of the library's integration paths:
// closed forms for the unfiltered wavepacket and brute-force quadrature
// helpers used to freeze expected values.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "spdcpol/amplitude.hpp"

namespace oracles {

inline constexpr double kSqrtPi = 1.7724538509055160273;

/// Unfiltered norm: separable closed form, integral of E_p^2 times strip width.
inline double norm_closed_form(double sigma_p, double DL) { return kSqrtPi * sigma_p * DL; }

/// Unfiltered transpose overlap. Reducing the 2-D integral along the strip
/// diagonal gives a Gaussian autocorrelation over the support intersection
/// s in [-h, h], h = min(tau_c, DL - tau_c):
///   O = (2 sigma_p sqrt(pi) / (1+2r)) * erf(h (1+2r) / (2 sigma_p)) / DL.
inline double overlap_closed_form(double sigma_p, double DL, double r, double tau_c) {
    const double h = std::min(tau_c, DL - tau_c);
    if (h <= 0.0) return 0.0;
    const double q = 1.0 + 2.0 * r;
    return 2.0 * sigma_p * kSqrtPi / q * std::erf(h * q / (2.0 * sigma_p)) / DL;
}

/// Plain 2-D trapezoid of f(i, j) over the grid, written locally so it does
/// not share code with the library's integrators.
template <typename F>
double trapezoid2d(const spdcpol::TimeGrid& g, F&& f) {
    double total = 0.0;
    for (int i = 0; i < g.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < g.n; ++j) row += g.weight(j) * f(i, j);
        total += g.weight(i) * row;
    }
    return total * g.dt() * g.dt();
}

/// Continuum value of the filtered amplitude at one point, by direct
/// quadrature of the convolution integral with an independent fine lattice.
inline double filtered_point_quadrature(const spdcpol::AnalyticAmplitude& amp, double sigma_f,
                                        double t1, double t2, double h = 0.25) {
    const double reach = 9.0 * sigma_f;
    const int m = static_cast<int>(std::ceil(reach / h));
    const double inv2sf2 = 1.0 / (2.0 * sigma_f * sigma_f);
    // Normalized kernel weights on the quadrature lattice.
    double wsum = 0.0;
    std::vector<double> w(static_cast<std::size_t>(2 * m + 1));
    for (int k = -m; k <= m; ++k) {
        w[static_cast<std::size_t>(k + m)] = std::exp(-(k * h) * (k * h) * inv2sf2);
        wsum += w[static_cast<std::size_t>(k + m)];
    }
    double acc = 0.0;
    for (int a = -m; a <= m; ++a) {
        const double x = t1 - a * h;
        double inner = 0.0;
        for (int b = -m; b <= m; ++b) {
            const double y = t2 - b * h;
            inner += w[static_cast<std::size_t>(b + m)] * amp(x, y);
        }
        acc += w[static_cast<std::size_t>(a + m)] * inner;
    }
    return acc / (wsum * wsum);
}

/// Discrete axis-wise convolution of the sampled amplitude at one grid
/// point, summed directly (validates the library's FFT route bit-for-bit up
/// to rounding).
inline std::complex<double> filtered_point_direct(const spdcpol::BiphotonAmplitude& amp,
                                                  double sigma_f, int i, int j) {
    const auto& g = amp.grid;
    const double dt = g.dt();
    const int half = static_cast<int>(std::ceil(8.5 * sigma_f / dt));
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double u = k * dt / sigma_f;
        taps[static_cast<std::size_t>(k + half)] = std::exp(-0.5 * u * u);
        sum += taps[static_cast<std::size_t>(k + half)];
    }
    for (double& t : taps) t /= sum;

    std::complex<double> acc{};
    for (int a = -half; a <= half; ++a) {
        const int ia = i - a;
        if (ia < 0 || ia >= g.n) continue;
        std::complex<double> inner{};
        for (int b = -half; b <= half; ++b) {
            const int jb = j - b;
            if (jb < 0 || jb >= g.n) continue;
            inner += taps[static_cast<std::size_t>(b + half)] * amp.at(ia, jb);
        }
        acc += taps[static_cast<std::size_t>(a + half)] * inner;
    }
    return acc;
}

/// Grid whose step divides DL so the strip edges land on sample diagonals
/// (norm checks), or with DL/dt half-integer so edges fall between diagonals
/// (overlap checks); picks n to cover [lo, hi].
inline spdcpol::TimeGrid aligned_grid(double lo, double hi, double dt) {
    spdcpol::TimeGrid g;
    g.t_min = lo;
    g.n = static_cast<int>(std::ceil((hi - lo) / dt)) + 1;
    g.t_max = lo + (g.n - 1) * dt;
    return g;
}

} // namespace oracles
