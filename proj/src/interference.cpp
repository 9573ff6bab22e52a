#include "spdcpol/interference.hpp"

#include <cmath>

#include "spdcpol/errors.hpp"

namespace spdcpol {

namespace {

struct ComponentWeights {
    double xx, xy, yx, yy;
};

// c_j = cos(pi/4 - theta_j), s_j = sin(pi/4 - theta_j); the 1/2 makes the
// tau = 0 full model collapse to the no-delay amplitude as an equality.
ComponentWeights weights_for(const AnalyzerPair& a, ModelKind model) {
    const double c1 = a.x1(), s1 = a.y1(), c2 = a.x2(), s2 = a.y2();
    ComponentWeights w{0.5 * c1 * c2, 0.5 * c1 * s2, 0.5 * s1 * c2, 0.5 * s1 * s2};
    if (model == ModelKind::Truncated) w.xy = w.yx = 0.0;
    return w;
}

double clamp_rate(double r) { return r < 0.0 ? 0.0 : r; }

} // namespace

ComponentAmplitudes component_amplitudes(const BiphotonAmplitude& amp,
                                         const DelayElement& delay) {
    const double tau = delay.effective_tau();
    const int n = amp.grid.n;
    ComponentAmplitudes comp;
    comp.grid = amp.grid;
    comp.tau = tau;
    comp.xx.resize(amp.grid.size());
    comp.xy.resize(amp.grid.size());
    comp.yx.resize(amp.grid.size());
    comp.yy.resize(amp.grid.size());

    if (tau == 0.0) {
        // All shifts vanish; reuse the sampled grid and its transpose.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t ij = static_cast<std::size_t>(i) * n + j;
                const Complex a12 = amp.values[ij];
                const Complex a21 = amp.values[static_cast<std::size_t>(j) * n + i];
                comp.xx[ij] = a12 + a21;
                comp.xy[ij] = a12 - a21;
                comp.yx[ij] = -comp.xy[ij];
                comp.yy[ij] = -comp.xx[ij];
            }
        }
        return comp;
    }

    for (int i = 0; i < n; ++i) {
        const double t1 = amp.grid.t(i);
        for (int j = 0; j < n; ++j) {
            const double t2 = amp.grid.t(j);
            const std::size_t ij = static_cast<std::size_t>(i) * n + j;
            comp.xx[ij] = amp.eval(t1, t2) + amp.eval(t2, t1);
            comp.yy[ij] = -(amp.eval(t1 + tau, t2 + tau) + amp.eval(t2 + tau, t1 + tau));
            comp.xy[ij] = amp.eval(t1, t2 + tau) - amp.eval(t2 + tau, t1);
            comp.yx[ij] = -(amp.eval(t1 + tau, t2) - amp.eval(t2, t1 + tau));
        }
    }
    return comp;
}

ComplexField detection_amplitude(const ComponentAmplitudes& comp, const AnalyzerPair& angles,
                                 ModelKind model) {
    const ComponentWeights w = weights_for(angles, model);
    ComplexField field;
    field.grid = comp.grid;
    field.values.resize(comp.grid.size());
    for (std::size_t k = 0; k < field.values.size(); ++k) {
        field.values[k] =
            w.xx * comp.xx[k] + w.xy * comp.xy[k] + w.yx * comp.yx[k] + w.yy * comp.yy[k];
    }
    return field;
}

RateValue coincidence_rate(const ComponentAmplitudes& comp, const AnalyzerPair& angles,
                           ModelKind model) {
    const ComponentWeights w = weights_for(angles, model);
    const int n = comp.grid.n;
    const double dt = comp.grid.dt();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        const std::size_t off = static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const Complex a = w.xx * comp.xx[off + j] + w.xy * comp.xy[off + j] +
                              w.yx * comp.yx[off + j] + w.yy * comp.yy[off + j];
            row += comp.grid.weight(j) * std::norm(a);
        }
        total += comp.grid.weight(i) * row;
    }
    return RateValue{clamp_rate(total * dt * dt)};
}

RateValue coincidence_rate(const BiphotonAmplitude& amp, const AnalyzerPair& angles,
                           const DelayElement& delay, ModelKind model) {
    return coincidence_rate(component_amplitudes(amp, delay), angles, model);
}

RateValue rate_no_delay(const BiphotonAmplitude& amp, const AnalyzerPair& angles) {
    const double s1 = std::sin(deg_to_rad(angles.theta1_deg));
    const double c1 = std::cos(deg_to_rad(angles.theta1_deg));
    const double s2 = std::sin(deg_to_rad(angles.theta2_deg));
    const double c2 = std::cos(deg_to_rad(angles.theta2_deg));
    const double w12 = s1 * c2;
    const double w21 = c1 * s2;

    const int n = amp.grid.n;
    const double dt = amp.grid.dt();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        const Complex* vi = &amp.values[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) {
            const Complex a = w12 * vi[j] + w21 * amp.values[static_cast<std::size_t>(j) * n + i];
            row += amp.grid.weight(j) * std::norm(a);
        }
        total += amp.grid.weight(i) * row;
    }
    return RateValue{clamp_rate(total * dt * dt)};
}

RateValue mixture_law_rate(double norm, Complex overlap, const AnalyzerPair& angles) {
    const double s1 = std::sin(deg_to_rad(angles.theta1_deg));
    const double c1 = std::cos(deg_to_rad(angles.theta1_deg));
    const double s2 = std::sin(deg_to_rad(angles.theta2_deg));
    const double c2 = std::cos(deg_to_rad(angles.theta2_deg));
    const double r = norm * (s1 * s1 * c2 * c2 + c1 * c1 * s2 * s2 +
                             2.0 * overlap.real() * s1 * c1 * s2 * c2);
    return RateValue{clamp_rate(r)};
}

PolarizationDensityMatrix density_matrix(const ComponentAmplitudes& comp) {
    const int n = comp.grid.n;
    const double dt = comp.grid.dt();
    const std::vector<Complex>* fields[4] = {&comp.xx, &comp.xy, &comp.yx, &comp.yy};

    PolarizationDensityMatrix g;
    for (int p = 0; p < 4; ++p) {
        for (int q = p; q < 4; ++q) {
            Complex acc{};
            for (int i = 0; i < n; ++i) {
                Complex row{};
                const std::size_t off = static_cast<std::size_t>(i) * n;
                const Complex* fp = fields[p]->data() + off;
                const Complex* fq = fields[q]->data() + off;
                for (int j = 0; j < n; ++j) row += comp.grid.weight(j) * fp[j] * std::conj(fq[j]);
                acc += comp.grid.weight(i) * row;
            }
            g.at(p, q) = acc * (dt * dt);
            if (q != p) g.at(q, p) = std::conj(g.at(p, q));
        }
    }

    const double trace = g.at(0, 0).real() + g.at(1, 1).real() + g.at(2, 2).real() +
                         g.at(3, 3).real();
    if (!(trace > 0.0)) throw NumericalError("density_matrix: zero total norm");

    PolarizationDensityMatrix rho;
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q)
            rho.at(p, q) = 0.5 * (g.at(p, q) + std::conj(g.at(q, p))) / trace;
    return rho;
}

RateValue rate_from_rho(const PolarizationDensityMatrix& rho, const AnalyzerPair& angles) {
    const double c1 = angles.x1(), s1 = angles.y1(), c2 = angles.x2(), s2 = angles.y2();
    const double v[4] = {c1 * c2, c1 * s2, s1 * c2, s1 * s2};
    Complex acc{};
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) acc += v[p] * rho.at(p, q) * v[q];
    return RateValue{clamp_rate(acc.real())};
}

double bell_fidelity(const PolarizationDensityMatrix& rho) {
    // |Phi> = (|XX> - |YY>)/sqrt(2) in basis order (XX, XY, YX, YY).
    const Complex f = 0.5 * (rho.at(0, 0) + rho.at(3, 3) - rho.at(0, 3) - rho.at(3, 0));
    return f.real();
}

} // namespace spdcpol
