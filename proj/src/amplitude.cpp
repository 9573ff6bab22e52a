#include "spdcpol/amplitude.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spdcpol/errors.hpp"

namespace spdcpol {

namespace {

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

/// Linear convolution of every row (or column) of an n x n complex grid with
/// a short symmetric kernel, via one reused FFT plan per direction.
class AxisConvolver {
  public:
    AxisConvolver(int n, const std::vector<double>& taps)
        : n_(n), half_(static_cast<int>(taps.size() / 2)),
          len_(next_pow2(static_cast<std::size_t>(n) + taps.size())) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * len_));
        fwd_ = fftw_plan_dft_1d(static_cast<int>(len_), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_1d(static_cast<int>(len_), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);

        // Kernel spectrum, taps centered at index 0 (negative lags wrapped).
        for (std::size_t i = 0; i < len_; ++i) buf_[i][0] = buf_[i][1] = 0.0;
        for (int k = -half_; k <= half_; ++k) {
            const std::size_t idx = static_cast<std::size_t>((k + static_cast<int>(len_)) % len_);
            buf_[idx][0] = taps[static_cast<std::size_t>(k + half_)];
        }
        fftw_execute(fwd_);
        spectrum_.resize(len_);
        const double scale = 1.0 / static_cast<double>(len_);
        for (std::size_t i = 0; i < len_; ++i)
            spectrum_[i] = Complex(buf_[i][0], buf_[i][1]) * scale;
    }

    ~AxisConvolver() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(buf_);
    }

    AxisConvolver(const AxisConvolver&) = delete;
    AxisConvolver& operator=(const AxisConvolver&) = delete;

    void rows(std::vector<Complex>& v) {
        for (int i = 0; i < n_; ++i) run(&v[static_cast<std::size_t>(i) * n_], 1);
    }

    void cols(std::vector<Complex>& v) {
        for (int j = 0; j < n_; ++j) run(&v[static_cast<std::size_t>(j)], n_);
    }

  private:
    void run(Complex* line, std::size_t stride) {
        for (int i = 0; i < n_; ++i) {
            buf_[i][0] = line[static_cast<std::size_t>(i) * stride].real();
            buf_[i][1] = line[static_cast<std::size_t>(i) * stride].imag();
        }
        for (std::size_t i = static_cast<std::size_t>(n_); i < len_; ++i)
            buf_[i][0] = buf_[i][1] = 0.0;
        fftw_execute(fwd_);
        for (std::size_t i = 0; i < len_; ++i) {
            const Complex y = Complex(buf_[i][0], buf_[i][1]) * spectrum_[i];
            buf_[i][0] = y.real();
            buf_[i][1] = y.imag();
        }
        fftw_execute(inv_);
        for (int i = 0; i < n_; ++i)
            line[static_cast<std::size_t>(i) * stride] = Complex(buf_[i][0], buf_[i][1]);
    }

    int n_;
    int half_;
    std::size_t len_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan inv_;
    std::vector<Complex> spectrum_;
};

} // namespace

Complex BiphotonAmplitude::eval(double t1, double t2) const {
    if (analytic) return Complex((*analytic)(t1, t2), 0.0);

    const double dt = grid.dt();
    const double x = (t1 - grid.t_min) / dt;
    const double y = (t2 - grid.t_min) / dt;
    if (x < 0.0 || y < 0.0 || x > grid.n - 1 || y > grid.n - 1) return {0.0, 0.0};

    int i0 = static_cast<int>(x);
    int j0 = static_cast<int>(y);
    if (i0 >= grid.n - 1) i0 = grid.n - 2;
    if (j0 >= grid.n - 1) j0 = grid.n - 2;
    const double fx = x - i0;
    const double fy = y - j0;
    return (1.0 - fx) * (1.0 - fy) * at(i0, j0) + fx * (1.0 - fy) * at(i0 + 1, j0) +
           (1.0 - fx) * fy * at(i0, j0 + 1) + fx * fy * at(i0 + 1, j0 + 1);
}

BiphotonAmplitude BiphotonAmplitude::transposed() const {
    BiphotonAmplitude out;
    out.grid = grid;
    out.values.resize(values.size());
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.values[static_cast<std::size_t>(i) * n + j] = at(j, i);
    return out;
}

BiphotonAmplitude build_amplitude(const PumpPulse& pump, const Crystal& crystal,
                                  const TimeGrid& grid) {
    if (!(grid.t_max > grid.t_min) || grid.n < 64)
        throw NumericalError("build_amplitude: degenerate grid");
    const double dt = grid.dt();
    if (dt > std::min(pump.sigma_p, crystal.DL) / 20.0)
        throw NumericalError("build_amplitude: grid step violates the sizing rule");
    const double lo = pump.t0 - 4.0 * pump.sigma_p - crystal.tau_c;
    const double hi = pump.t0 + 4.0 * pump.sigma_p + crystal.DL;
    if (grid.t_min > lo || grid.t_max < hi)
        throw NumericalError("build_amplitude: grid span violates the sizing rule");

    BiphotonAmplitude amp;
    amp.grid = grid;
    amp.analytic = AnalyticAmplitude{pump, crystal};
    amp.values.assign(grid.size(), Complex{});

    const AnalyticAmplitude& f = *amp.analytic;
    const int n = grid.n;
    for (int i = 0; i < n; ++i) {
        const double t1 = grid.t(i);
        // Support in t2: 0 < t2 + tau_c - t1 <= DL.
        const double lo2 = t1 - crystal.tau_c;
        const double hi2 = lo2 + crystal.DL;
        int j = std::max(0, static_cast<int>(std::floor((lo2 - grid.t_min) / dt)));
        const int j_end = std::min(n - 1, static_cast<int>(std::ceil((hi2 - grid.t_min) / dt)));
        for (; j <= j_end; ++j) {
            amp.values[static_cast<std::size_t>(i) * n + j] = Complex(f(t1, grid.t(j)), 0.0);
        }
    }
    return amp;
}

BiphotonAmplitude apply_filters(const BiphotonAmplitude& amp, const FilterSpec& filter) {
    if (!filter.enabled)
        throw std::invalid_argument("apply_filters: filter is disabled (identity is the caller's)");
    if (!(filter.sigma_f > 0.0)) throw std::invalid_argument("apply_filters: sigma_f must be > 0");

    const double dt = amp.grid.dt();
    const int half = static_cast<int>(std::ceil(8.5 * filter.sigma_f / dt));
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double u = k * dt / filter.sigma_f;
        taps[static_cast<std::size_t>(k + half)] = std::exp(-0.5 * u * u);
        sum += taps[static_cast<std::size_t>(k + half)];
    }
    for (double& t : taps) t /= sum;

    BiphotonAmplitude out;
    out.grid = amp.grid;
    out.values = amp.values;
    out.analytic.reset();

    AxisConvolver conv(amp.grid.n, taps);
    conv.rows(out.values);
    conv.cols(out.values);
    return out;
}

double norm(const BiphotonAmplitude& amp) {
    const int n = amp.grid.n;
    const double dt = amp.grid.dt();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        const Complex* v = &amp.values[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) row += amp.grid.weight(j) * std::norm(v[j]);
        total += amp.grid.weight(i) * row;
    }
    total *= dt * dt;
    if (!(total > 0.0)) throw NumericalError("norm: amplitude is zero on the grid");
    return total;
}

OverlapResult overlap(const BiphotonAmplitude& amp) {
    const int n = amp.grid.n;
    const double dt = amp.grid.dt();
    Complex acc{};
    for (int i = 0; i < n; ++i) {
        Complex row{};
        const Complex* vi = &amp.values[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) {
            const Complex vt = amp.values[static_cast<std::size_t>(j) * n + i];
            row += amp.grid.weight(j) * vi[j] * std::conj(vt);
        }
        acc += amp.grid.weight(i) * row;
    }
    acc *= dt * dt;
    const double n2 = norm(amp);
    return OverlapResult{acc / n2, n2};
}

BiphotonAmplitude make_amplitude(const ExperimentConfig& cfg) {
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
        std::string msg = "make_amplitude: invalid configuration:";
        for (const auto& s : violations) msg += "\n  " + s;
        throw ConfigError(msg);
    }
    BiphotonAmplitude amp = build_amplitude(cfg.pump, cfg.crystal, cfg.grid);
    if (cfg.filter.enabled) amp = apply_filters(amp, cfg.filter);
    return amp;
}

} // namespace spdcpol
