#include "qclock/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qclock/analytic.hpp"
#include "qclock/oracle.hpp"

namespace qclock {

namespace {

void check_config(const ScanConfig& cfg, const SystemParams& params) {
    const double period = 2.0 * std::numbers::pi / params.rabi;
    if (!(cfg.t_max >= period))
        throw std::invalid_argument("ScanConfig: t_max must cover at least one Rabi period");
    if (cfg.n_t < 1000)
        throw std::invalid_argument("ScanConfig: n_t must be >= 1000");
}

// Golden-section maximization of Pe(t) on [a, b].
double golden_max(const ClosedFormSolution& sol, double a, double b, double tol, double& t_best) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval_w(sol, x1);
    double f2 = eval_w(sol, x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval_w(sol, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval_w(sol, x1);
        }
    }
    t_best = 0.5 * (a + b);
    return 0.5 * (1.0 + eval_w(sol, t_best));
}

void oracle_spot_check(const SystemParams& params, const ClosedFormSolution& sol, double t_max) {
    const std::size_t n = 64;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = t_max * double(i + 1) / double(n);
    const auto traj = integrate_bloch(params, BlochVector{0.0, 0.0, -1.0, Frame::dirac}, times,
                                      IntegratorConfig::defaults_for(params));
    for (std::size_t i = 0; i < n; ++i) {
        const double w_an = eval_w(sol, times[i]);
        if (std::abs(w_an - traj[i].w) > 1e-7)
            throw physicality_error(
                "spectroscopy spot check: analytic and integrated w disagree by " +
                std::to_string(std::abs(w_an - traj[i].w)) + " at detuning " +
                std::to_string(params.detuning()));
    }
}

}  // namespace

ScanConfig ScanConfig::defaults_for(double rabi) {
    ScanConfig cfg;
    cfg.delta_min = -5.0 * rabi;
    cfg.delta_max = 5.0 * rabi;
    cfg.n_delta = 2001;
    cfg.t_max = 6.0 * std::numbers::pi / rabi;
    cfg.n_t = 10000;
    cfg.gamma_list = {0.0, 0.01 * rabi, 0.05 * rabi, 0.1 * rabi, 0.2 * rabi};
    return cfg;
}

PeakInfo pe_max_detail(const SystemParams& params, const ScanConfig& cfg) {
    check_config(cfg, params);
    const BlochVector ground{0.0, 0.0, -1.0, Frame::dirac};
    const ClosedFormSolution sol = solve(params, ground);

    const double dt = cfg.t_max / double(cfg.n_t - 1);
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < cfg.n_t; ++i) {
        const double w = eval_w(sol, i * dt);
        if (w > best) {
            best = w;
            best_i = i;
        }
    }
    const double a = std::max(0.0, (best_i - 1) * dt);
    const double b = std::min(cfg.t_max, (best_i + 1) * dt);

    PeakInfo info;
    info.value = golden_max(sol, a, b, 1e-10, info.t_at);
    info.boundary = sol.boundary;
    return info;
}

double pe_max(const SystemParams& params, const ScanConfig& cfg) {
    return pe_max_detail(params, cfg).value;
}

SpectrumResult scan(const ScanConfig& cfg, const SystemParams& base) {
    if (cfg.n_delta < 2 || !(cfg.delta_max > cfg.delta_min))
        throw std::invalid_argument("ScanConfig: need a valid detuning grid");

    SpectrumResult out;
    out.gamma = base.gamma;
    out.deltas.resize(cfg.n_delta);
    out.pemax.resize(cfg.n_delta);
    out.relative_fwhm = std::numeric_limits<double>::quiet_NaN();

    int best_i = 0;
    for (int i = 0; i < cfg.n_delta; ++i) {
        const double delta =
            cfg.delta_min + (cfg.delta_max - cfg.delta_min) * i / double(cfg.n_delta - 1);
        const SystemParams params =
            SystemParams::from_detuning(base.omega0, delta, base.rabi, base.gamma);
        const PeakInfo info = pe_max_detail(params, cfg);
        out.deltas[i] = delta;
        out.pemax[i] = info.value;
        out.boundary_flagged = out.boundary_flagged || info.boundary;
        if (info.value > out.pemax[best_i]) best_i = i;
        if (cfg.oracle_spot_stride > 0 && i % cfg.oracle_spot_stride == 0) {
            const ClosedFormSolution sol = solve(params, BlochVector{0.0, 0.0, -1.0, Frame::dirac});
            oracle_spot_check(params, sol, cfg.t_max);
        }
    }
    out.peak_delta = out.deltas[best_i];
    out.pemax_peak = out.pemax[best_i];

    const double level = 0.5 * out.pemax_peak;
    const auto interpolate = [&](int lo, int hi) {
        // crossing between grid points lo and hi
        const double p0 = out.pemax[lo], p1 = out.pemax[hi];
        return out.deltas[lo] + (level - p0) * (out.deltas[hi] - out.deltas[lo]) / (p1 - p0);
    };
    int j = best_i;
    while (j > 0 && out.pemax[j] >= level) --j;
    if (out.pemax[j] >= level)
        throw grid_error("left half-maximum crossing lies outside the detuning grid");
    const double left = interpolate(j, j + 1);
    j = best_i;
    while (j < cfg.n_delta - 1 && out.pemax[j] >= level) ++j;
    if (out.pemax[j] >= level)
        throw grid_error("right half-maximum crossing lies outside the detuning grid");
    const double right = interpolate(j - 1, j);
    out.fwhm = right - left;
    return out;
}

std::vector<std::pair<double, double>> relative_fwhm(std::span<const double> gammas,
                                                     const ScanConfig& cfg,
                                                     const SystemParams& base) {
    const SystemParams baseline_params =
        SystemParams::make(base.omega0, base.omegaD, base.rabi, 0.0);
    const double fwhm0 = scan(cfg, baseline_params).fwhm;

    std::vector<double> ordered(gammas.begin(), gammas.end());
    std::sort(ordered.begin(), ordered.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(ordered.size());
    for (const double gamma : ordered) {
        if (gamma == 0.0) {
            out.emplace_back(0.0, 1.0);
            continue;
        }
        const SystemParams params = SystemParams::make(base.omega0, base.omegaD, base.rabi, gamma);
        out.emplace_back(gamma, scan(cfg, params).fwhm / fwhm0);
    }
    return out;
}

}  // namespace qclock
