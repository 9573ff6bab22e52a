#include "spdcpol/analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spdcpol/errors.hpp"

namespace spdcpol {

namespace {

// Solve the 3x3 system M x = b by Gaussian elimination with partial
// pivoting. Returns false when the design is singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& x) {
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) return false;

    std::size_t perm[3] = {0, 1, 2};
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 3; ++r)
            if (std::abs(m[perm[r]][col]) > std::abs(m[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        const double p = m[perm[col]][col];
        if (std::abs(p) < 1e-12 * scale) return false;
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = m[perm[r]][col] / p;
            for (std::size_t c = col; c < 3; ++c) m[perm[r]][c] -= f * m[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    for (int col = 2; col >= 0; --col) {
        const std::size_t rc = perm[static_cast<std::size_t>(col)];
        double s = b[rc];
        for (std::size_t c = static_cast<std::size_t>(col) + 1; c < 3; ++c) s -= m[rc][c] * x[c];
        x[static_cast<std::size_t>(col)] = s / m[rc][static_cast<std::size_t>(col)];
    }
    return true;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SplitMix64 point_stream(std::uint64_t seed, std::size_t index) {
    return SplitMix64(mix64(seed ^ mix64(static_cast<std::uint64_t>(index) + 1)));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_csv_number(std::string_view v, int line_no) {
    v = trim(v);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw DataError("line " + std::to_string(line_no) + ": non-numeric field '" +
                        std::string(v) + "'");
    return out;
}

} // namespace

std::vector<double> default_theta2_grid() {
    std::vector<double> t(41);
    for (int i = 0; i < 41; ++i) t[static_cast<std::size_t>(i)] = i * 4.5;
    return t;
}

ModulationCurve scan_theta2(const ExperimentConfig& cfg, double theta1_deg,
                            const std::vector<double>& theta2_deg) {
    const BiphotonAmplitude amp = make_amplitude(cfg);
    const ComponentAmplitudes comp = component_amplitudes(amp, cfg.delay);

    ModulationCurve curve;
    curve.theta1_deg = theta1_deg;
    curve.kind = CurveKind::Simulated;
    curve.points.reserve(theta2_deg.size());
    for (double t2 : theta2_deg) {
        const RateValue r = coincidence_rate(comp, AnalyzerPair(theta1_deg, t2), cfg.model);
        curve.points.push_back(CurvePoint{t2, r.value, std::nullopt});
    }
    return curve;
}

std::vector<std::pair<double, VisibilityResult>> scan_tau(const ExperimentConfig& cfg,
                                                          double theta1_deg,
                                                          const std::vector<double>& tau_fs) {
    const BiphotonAmplitude amp = make_amplitude(cfg);
    const std::vector<double> thetas = default_theta2_grid();

    std::vector<std::pair<double, VisibilityResult>> out;
    out.reserve(tau_fs.size());
    for (double tau : tau_fs) {
        const ComponentAmplitudes comp =
            component_amplitudes(amp, DelayElement{tau, true});
        ModulationCurve curve;
        curve.theta1_deg = theta1_deg;
        curve.kind = CurveKind::Simulated;
        for (double t2 : thetas) {
            const RateValue r = coincidence_rate(comp, AnalyzerPair(theta1_deg, t2), cfg.model);
            curve.points.push_back(CurvePoint{t2, r.value, std::nullopt});
        }
        out.emplace_back(tau, fit_modulation(curve));
    }
    return out;
}

VisibilityResult fit_modulation(const ModulationCurve& curve) {
    const std::size_t npts = curve.points.size();
    if (npts < 5) throw DataError("fit_modulation: need at least 5 points");

    const bool weighted = std::all_of(curve.points.begin(), curve.points.end(),
                                      [](const CurvePoint& p) { return p.sigma.has_value(); });
    for (const CurvePoint& p : curve.points) {
        if (p.sigma && !(*p.sigma > 0.0))
            throw DataError("fit_modulation: non-positive sigma");
    }

    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> b{};
    for (const CurvePoint& p : curve.points) {
        const double th = 2.0 * deg_to_rad(p.theta2_deg);
        const double f[3] = {1.0, std::cos(th), std::sin(th)};
        const double w = weighted ? 1.0 / (*p.sigma * *p.sigma) : 1.0;
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = r; c < 3; ++c) m[r][c] += w * f[r] * f[c];
            b[r] += w * f[r] * p.value;
        }
    }
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < r; ++c) m[r][c] = m[c][r];

    std::array<double, 3> a{};
    if (!solve3(m, b, a))
        throw DataError("fit_modulation: singular design (theta2 values degenerate modulo 90 deg)");

    VisibilityResult res;
    res.a0 = a[0];
    res.a1 = a[1];
    res.a2 = a[2];
    if (!(res.a0 > 0.0)) throw DataError("fit_modulation: non-positive fitted offset");

    const double amp = std::hypot(res.a1, res.a2);
    res.visibility = amp / res.a0;
    res.exceeds_unity = res.visibility > 1.0;

    double ss = 0.0;
    for (const CurvePoint& p : curve.points) {
        const double th = 2.0 * deg_to_rad(p.theta2_deg);
        const double fit = res.a0 + res.a1 * std::cos(th) + res.a2 * std::sin(th);
        ss += (p.value - fit) * (p.value - fit);
    }
    res.residual_rms = std::sqrt(ss / static_cast<double>(npts));

    if (weighted) {
        // Covariance of (a0, a1, a2) is M^{-1}; sigma_v by the delta method.
        std::array<std::array<double, 3>, 3> cov{};
        for (std::size_t c = 0; c < 3; ++c) {
            std::array<double, 3> e{};
            e[c] = 1.0;
            std::array<double, 3> col{};
            if (!solve3(m, e, col)) throw DataError("fit_modulation: singular design");
            for (std::size_t r = 0; r < 3; ++r) cov[r][c] = col[r];
        }
        std::array<double, 3> g{};
        if (amp > 0.0) {
            g = {-res.visibility / res.a0, res.a1 / (res.a0 * amp), res.a2 / (res.a0 * amp)};
        } else {
            g = {0.0, 1.0 / res.a0, 1.0 / res.a0};
        }
        double var = 0.0;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) var += g[r] * cov[r][c] * g[c];
        res.sigma_v = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return res;
}

std::vector<VisibilityMapRow> visibility_map(const ExperimentConfig& cfg,
                                             const std::vector<double>& theta1_deg) {
    const BiphotonAmplitude amp = make_amplitude(cfg);
    const ComponentAmplitudes comp = component_amplitudes(amp, cfg.delay);
    const std::vector<double> thetas = default_theta2_grid();

    std::vector<VisibilityMapRow> rows;
    rows.reserve(theta1_deg.size());
    for (double t1 : theta1_deg) {
        VisibilityMapRow row;
        row.theta1_deg = t1;
        for (ModelKind model : {ModelKind::Full, ModelKind::Truncated}) {
            ModulationCurve curve;
            curve.theta1_deg = t1;
            for (double t2 : thetas) {
                const RateValue r = coincidence_rate(comp, AnalyzerPair(t1, t2), model);
                curve.points.push_back(CurvePoint{t2, r.value, std::nullopt});
            }
            const double v = fit_modulation(curve).visibility;
            (model == ModelKind::Full ? row.v_full : row.v_truncated) = v;
        }
        rows.push_back(row);
    }
    return rows;
}

long long poisson_variate(double mean, SplitMix64& rng) {
    if (!(mean > 0.0)) return 0;
    if (mean < 30.0) {
        // Knuth: multiply uniforms until the product drops below exp(-mean).
        const double limit = std::exp(-mean);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.uniform();
        } while (p > limit);
        return k - 1;
    }

    // Hormann's PTRS transformed rejection, valid for mean >= 10.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<long long>(kf);
    }
}

ModulationCurve synth_counts(const ModulationCurve& curve, double n_peak, std::uint64_t seed) {
    if (curve.kind != CurveKind::Simulated)
        throw std::invalid_argument("synth_counts: input must be a simulated curve");
    if (!(n_peak >= 10.0)) throw std::invalid_argument("synth_counts: n_peak must be >= 10");

    double peak = 0.0;
    for (const CurvePoint& p : curve.points) peak = std::max(peak, p.value);

    ModulationCurve out;
    out.theta1_deg = curve.theta1_deg;
    out.kind = CurveKind::Measured;
    out.points.reserve(curve.points.size());
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const double mean = peak > 0.0 ? n_peak * curve.points[k].value / peak : 0.0;
        SplitMix64 rng = point_stream(seed, k);
        const double count = static_cast<double>(poisson_variate(mean, rng));
        out.points.push_back(CurvePoint{curve.points[k].theta2_deg, count,
                                        std::sqrt(std::max(count, 1.0))});
    }
    return out;
}

ModulationCurve ingest_counts_csv(std::string_view text) {
    ModulationCurve curve;
    curve.theta1_deg = std::numeric_limits<double>::quiet_NaN(); // not carried by the format
    curve.kind = CurveKind::Measured;

    int line_no = 0;
    bool header_seen = false;
    bool has_sigma_col = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                                : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }

        if (!header_seen) {
            if (fields.size() == 2 && trim(fields[0]) == "theta2_deg" &&
                trim(fields[1]) == "counts") {
                has_sigma_col = false;
            } else if (fields.size() == 3 && trim(fields[0]) == "theta2_deg" &&
                       trim(fields[1]) == "counts" && trim(fields[2]) == "sigma") {
                has_sigma_col = true;
            } else {
                throw DataError("line " + std::to_string(line_no) +
                                ": expected header theta2_deg,counts[,sigma]");
            }
            header_seen = true;
            continue;
        }

        if (fields.size() != (has_sigma_col ? 3u : 2u))
            throw DataError("line " + std::to_string(line_no) + ": wrong number of fields");

        CurvePoint p;
        p.theta2_deg = parse_csv_number(fields[0], line_no);
        p.value = parse_csv_number(fields[1], line_no);
        if (has_sigma_col) {
            const double s = parse_csv_number(fields[2], line_no);
            if (!(s > 0.0))
                throw DataError("line " + std::to_string(line_no) + ": sigma must be positive");
            p.sigma = s;
        } else {
            p.sigma = std::sqrt(std::max(p.value, 1.0));
        }
        curve.points.push_back(p);
    }

    if (!header_seen) throw DataError("empty document");
    if (curve.points.size() < 5) throw DataError("need at least 5 data rows");

    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        for (std::size_t j = i + 1; j < curve.points.size(); ++j) {
            const double di = reduce_angle_deg(curve.points[i].theta2_deg);
            const double dj = reduce_angle_deg(curve.points[j].theta2_deg);
            if (std::abs(di - dj) < 1e-9)
                throw DataError("duplicate theta2 angles (modulo 180 deg) at rows " +
                                std::to_string(i + 1) + " and " + std::to_string(j + 1));
        }
    }
    return curve;
}

} // namespace spdcpol
