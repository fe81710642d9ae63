#include "qclock/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qclock {

namespace {

template <typename State>
State axpy(const State& a, double s, const State& b) {
    State out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b[i];
    return out;
}

// One classical RK4 step; the right-hand side is evaluated at the exact
// substage times (no frozen-coefficient shortcut).
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, double h, const State& y) {
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(t + h, axpy(y, h, k3));
    State out = y;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Cash-Karp embedded 4(5) pair.
template <typename State, typename Rhs>
void rkck_step(const Rhs& rhs, double t, double h, const State& y, State& y5, double& err_inf,
               double abs_tol, double rel_tol) {
    constexpr double b21 = 1.0 / 5.0;
    constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                     b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                     c6 = 512.0 / 1771.0;
    constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                     d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0, d6 = c6 - 0.25;

    const State k1 = rhs(t, y);
    State tmp = axpy(y, h * b21, k1);
    const State k2 = rhs(t + h / 5.0, tmp);
    tmp = y;
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] += h * (b31 * k1[i] + b32 * k2[i]);
    const State k3 = rhs(t + 3.0 * h / 10.0, tmp);
    tmp = y;
    for (std::size_t i = 0; i < tmp.size(); ++i)
        tmp[i] += h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    const State k4 = rhs(t + 3.0 * h / 5.0, tmp);
    tmp = y;
    for (std::size_t i = 0; i < tmp.size(); ++i)
        tmp[i] += h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    const State k5 = rhs(t + h, tmp);
    tmp = y;
    for (std::size_t i = 0; i < tmp.size(); ++i)
        tmp[i] += h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
    const State k6 = rhs(t + 7.0 * h / 8.0, tmp);

    y5 = y;
    err_inf = 0.0;
    for (std::size_t i = 0; i < y5.size(); ++i) {
        y5[i] += h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
        const double err =
            std::abs(h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]));
        const double tol = abs_tol + rel_tol * std::abs(y5[i]);
        err_inf = std::max(err_inf, err / tol);
    }
}

void check_times(std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("integrate: no output times given");
    if (!(times[0] >= 0.0)) throw std::invalid_argument("integrate: times[0] must be >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("integrate: times must be strictly increasing");
}

// March from t_from to t_to with fixed step h, shortening the last step so
// the endpoint is hit exactly.
template <typename State, typename Rhs>
State advance_rk4(const Rhs& rhs, State y, double t_from, double t_to, double h) {
    double t = t_from;
    while (t < t_to) {
        const double step = std::min(h, t_to - t);
        y = rk4_step(rhs, t, step, y);
        t += step;
        if (step < h) break;
    }
    return y;
}

template <typename State, typename Rhs>
State advance_rk45(const Rhs& rhs, State y, double t_from, double t_to, double& h,
                   double abs_tol, double rel_tol) {
    const double h_min = 1e-14 * std::max(1.0, std::abs(t_to));
    double t = t_from;
    while (t < t_to) {
        double step = std::min(h, t_to - t);
        State y5;
        double err = 0.0;
        rkck_step(rhs, t, step, y, y5, err, abs_tol, rel_tol);
        if (err <= 1.0) {
            t += step;
            y = y5;
            const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = step * std::min(5.0, std::max(1.0, grow));
        } else {
            const double shrink = std::max(0.1, 0.9 * std::pow(err, -0.25));
            h = step * shrink;
            if (h < h_min)
                throw stiffness_error("adaptive step size underflow at t = " + std::to_string(t));
        }
    }
    return y;
}

template <typename State, typename Rhs>
std::vector<State> integrate(const Rhs& rhs, State y, std::span<const double> times,
                             const IntegratorConfig& cfg) {
    if (!(cfg.step > 0.0)) throw std::invalid_argument("integrate: step must be > 0");
    check_times(times);

    std::vector<State> out;
    out.reserve(times.size());
    double t = 0.0;
    double h_adaptive = cfg.step;
    for (const double t_next : times) {
        if (t_next > t) {
            if (cfg.method == IntegratorMethod::RK4)
                y = advance_rk4(rhs, y, t, t_next, cfg.step);
            else
                y = advance_rk45(rhs, y, t, t_next, h_adaptive, cfg.abs_tol, cfg.rel_tol);
            t = t_next;
        }
        out.push_back(y);
    }
    return out;
}

}  // namespace

IntegratorConfig IntegratorConfig::defaults_for(const SystemParams& params) {
    const double period = 2.0 * std::numbers::pi / params.total_rabi();
    double step = 1e-3 * period;
    step = std::min(step, 0.01 * period);
    if (params.gamma > 0.0) step = std::min(step, 0.01 / params.gamma);
    IntegratorConfig cfg;
    cfg.step = step;
    return cfg;
}

std::vector<BlochVector> integrate_bloch(const SystemParams& params, const BlochVector& initial,
                                         std::span<const double> times,
                                         const IntegratorConfig& cfg) {
    if (initial.frame != Frame::dirac)
        throw frame_mismatch_error("integrate_bloch requires a dirac-frame initial vector");
    validate_state(initial);

    const double gamma = params.gamma;
    const double rabi = params.rabi;
    const double delta = params.detuning();
    using State = std::array<double, 3>;
    const auto rhs = [=](double t, const State& y) -> State {
        const double s = std::sin(delta * t);
        const double c = std::cos(delta * t);
        return State{-0.5 * gamma * y[0] + rabi * s * y[2],
                     -0.5 * gamma * y[1] - rabi * c * y[2],
                     -rabi * s * y[0] + rabi * c * y[1] - gamma * y[2] - gamma};
    };

    const auto states = integrate(rhs, State{initial.u, initial.v, initial.w}, times, cfg);
    std::vector<BlochVector> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(BlochVector{s[0], s[1], s[2], Frame::dirac});
    return out;
}

std::vector<DensityMatrix> integrate_density(const SystemParams& params,
                                             const DensityMatrix& initial,
                                             std::span<const double> times,
                                             const IntegratorConfig& cfg) {
    if (initial.frame != Frame::dirac)
        throw frame_mismatch_error("integrate_density requires a dirac-frame initial state");
    validate_state(initial);

    const double gamma = params.gamma;
    const double rabi = params.rabi;
    const double delta = params.detuning();
    using C = std::complex<double>;
    using State = std::array<C, 4>;  // rho00, rho01, rho10, rho11
    const C half_i_rabi = C{0.0, -0.5} * rabi;  // rabi / (2 i)
    const auto rhs = [=](double t, const State& y) -> State {
        const C e_minus = std::polar(1.0, -delta * t);
        const C e_plus = std::polar(1.0, delta * t);
        const C pump = half_i_rabi * (e_minus * y[2] - e_plus * y[1]);
        const C inv = y[3] - y[0];
        return State{pump - gamma * y[0],
                     half_i_rabi * e_minus * inv - 0.5 * gamma * y[1],
                     -half_i_rabi * e_plus * inv - 0.5 * gamma * y[2],
                     -pump + gamma * y[0]};
    };

    const auto states =
        integrate(rhs, State{initial.rho00, initial.rho01, initial.rho10, initial.rho11}, times,
                  cfg);
    std::vector<DensityMatrix> out;
    out.reserve(states.size());
    for (const auto& s : states) {
        DensityMatrix rho;
        rho.rho00 = s[0];
        rho.rho01 = s[1];
        rho.rho10 = s[2];
        rho.rho11 = s[3];
        rho.frame = Frame::dirac;
        out.push_back(rho);
    }
    return out;
}

}  // namespace qclock
