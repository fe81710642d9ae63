#include "qclock/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "linalg.hpp"

namespace qclock {

namespace {

constexpr double condition_limit = 1e12;

// Coefficient systems matching (g''(0), g'(0), g(0)) for each cubic branch.
detail::Mat<3> cubic_system(const RootStructure& roots) {
    switch (roots.kind) {
        case RootCase::TripleRoot: {
            const double e = roots.lambda1;
            return {{{e * e, 2.0 * e, 2.0}, {e, 1.0, 0.0}, {1.0, 0.0, 0.0}}};
        }
        case RootCase::SingleRealPlusDouble: {
            const double l1 = roots.lambda1, l2 = roots.lambda2;
            return {{{l1 * l1, l2 * l2, 2.0 * l2}, {l1, l2, 1.0}, {1.0, 1.0, 0.0}}};
        }
        case RootCase::ThreeRealDistinct: {
            const double l1 = roots.lambda1, l2 = roots.lambda2, l3 = roots.lambda3;
            return {{{l1 * l1, l2 * l2, l3 * l3}, {l1, l2, l3}, {1.0, 1.0, 1.0}}};
        }
        case RootCase::OneRealPlusConjugatePair: {
            const double l1 = roots.lambda1, e = roots.eta, w = roots.omega;
            return {{{l1 * l1, e * e - w * w, 2.0 * e * w}, {l1, e, w}, {1.0, 1.0, 0.0}}};
        }
        default:
            throw std::logic_error("cubic_system: quadratic root case on the cubic path");
    }
}

SolutionBranch cubic_branch(RootCase kind) {
    switch (kind) {
        case RootCase::TripleRoot: return SolutionBranch::TripleRoot;
        case RootCase::SingleRealPlusDouble: return SolutionBranch::SinglePlusDouble;
        case RootCase::ThreeRealDistinct: return SolutionBranch::ThreeReal;
        default: return SolutionBranch::RealPlusConjPair;
    }
}

// The derivative rows of the coefficient systems carry different powers of
// frequency, so the raw matrix is badly scaled whenever the unit is far
// from 1.  Equilibrating each row by the characteristic root magnitude
// makes the solve and its condition estimate unit independent.
template <int N>
bool solve_equilibrated(detail::Mat<N> a, detail::Vec<N> b, double lam_scale, detail::Vec<N>& x,
                        double& cond) {
    for (int i = 0; i < N; ++i) {
        const int power = N - 1 - i;  // row i matches g^{(power)}(0)
        double row_scale = 1.0;
        for (int k = 0; k < power; ++k) row_scale *= lam_scale;
        for (int j = 0; j < N; ++j) a[i][j] /= row_scale;
        b[i] /= row_scale;
    }
    if (!detail::solve_inplace<N>(a, b, x)) {
        cond = std::numeric_limits<double>::infinity();
        return false;
    }
    cond = detail::condition<N>(a);
    return true;
}

// Degenerate (double/triple root) reclassification used when the parameters
// sit on the discriminant boundary and the non-degenerate coefficient
// system is too ill-conditioned to trust.
RootStructure degenerate_roots(const SystemParams& params, const RootStructure& roots) {
    RootStructure out = roots;
    const double delta = params.detuning();
    const double shift = params.gamma / 3.0;
    const double tol_p =
        1e-12 * (delta * delta + params.rabi * params.rabi + params.gamma * params.gamma / 12.0);
    out.boundary_proximal = true;
    out.eta = 0.0;
    out.omega = 0.0;
    if (std::abs(roots.p) <= tol_p) {
        out.kind = RootCase::TripleRoot;
        out.lambda1 = out.lambda2 = out.lambda3 = shift;
    } else {
        out.kind = RootCase::SingleRealPlusDouble;
        out.lambda1 = shift - std::cbrt(4.0 * roots.q);
        out.lambda2 = out.lambda3 = shift + std::cbrt(0.5 * roots.q);
    }
    return out;
}

void build_terms(ClosedFormSolution& sol) {
    sol.n_poly_terms = 0;
    sol.has_osc = false;
    const RootStructure& r = sol.roots;
    switch (sol.branch) {
        case SolutionBranch::ZeroDetTwoReal:
            sol.poly_terms[0] = {r.lambda1, sol.c1, 0.0, 0.0};
            sol.poly_terms[1] = {r.lambda2, sol.c2, 0.0, 0.0};
            sol.n_poly_terms = 2;
            break;
        case SolutionBranch::ZeroDetDoubleRoot:
            sol.poly_terms[0] = {r.eta, sol.c1, sol.c2, 0.0};
            sol.n_poly_terms = 1;
            break;
        case SolutionBranch::ZeroDetConjPair:
            sol.osc_term = {r.eta, r.omega, sol.c1, sol.c2};
            sol.has_osc = true;
            break;
        case SolutionBranch::TripleRoot:
            sol.poly_terms[0] = {r.lambda1, sol.c1, sol.c2, sol.c3};
            sol.n_poly_terms = 1;
            break;
        case SolutionBranch::SinglePlusDouble:
            sol.poly_terms[0] = {r.lambda1, sol.c1, 0.0, 0.0};
            sol.poly_terms[1] = {r.lambda2, sol.c2, sol.c3, 0.0};
            sol.n_poly_terms = 2;
            break;
        case SolutionBranch::ThreeReal:
            sol.poly_terms[0] = {r.lambda1, sol.c1, 0.0, 0.0};
            sol.poly_terms[1] = {r.lambda2, sol.c2, 0.0, 0.0};
            sol.poly_terms[2] = {r.lambda3, sol.c3, 0.0, 0.0};
            sol.n_poly_terms = 3;
            break;
        case SolutionBranch::RealPlusConjPair:
            sol.poly_terms[0] = {r.lambda1, sol.c1, 0.0, 0.0};
            sol.n_poly_terms = 1;
            sol.osc_term = {r.eta, r.omega, sol.c2, sol.c3};
            sol.has_osc = true;
            break;
    }
}

// The damped-oscillation branches also have explicit closed-form
// coefficient expressions; they are recomputed alongside the generic solve
// and compared.  A mismatch means a transcription or dispatch bug, so it
// aborts rather than returning silently wrong dynamics.
void cross_check(const char* what, std::span<const double> generic,
                 std::span<const double> closed, double cond) {
    double scale = 1.0;
    for (const double c : closed) scale = std::max(scale, std::abs(c));
    const double tol =
        std::max(1e-9, 100.0 * cond * std::numeric_limits<double>::epsilon()) * scale;
    for (std::size_t i = 0; i < generic.size(); ++i)
        if (!(std::abs(generic[i] - closed[i]) <= tol))
            throw std::logic_error(std::string("coefficient cross-check failed for ") + what);
}

// exp(-gamma t) * g^{(k)}(t) for k = 0..3, from term-by-term analytic
// differentiation; the decay factor keeps every exponent nonpositive.
using GDerivs = std::array<double, 4>;

GDerivs eval_g_decayed(const ClosedFormSolution& sol, double t) {
    GDerivs out{};
    const double gamma = sol.params.gamma;
    for (int n = 0; n < sol.n_poly_terms; ++n) {
        const PolyExpTerm& term = sol.poly_terms[n];
        double a[4][3] = {{term.a0, term.a1, term.a2}};
        for (int k = 1; k < 4; ++k) {
            a[k][0] = term.lambda * a[k - 1][0] + a[k - 1][1];
            a[k][1] = term.lambda * a[k - 1][1] + 2.0 * a[k - 1][2];
            a[k][2] = term.lambda * a[k - 1][2];
        }
        const double e = std::exp((term.lambda - gamma) * t);
        for (int k = 0; k < 4; ++k)
            out[k] += e * ((a[k][2] * t + a[k][1]) * t + a[k][0]);
    }
    if (sol.has_osc) {
        const OscTerm& term = sol.osc_term;
        double ac[4] = {term.a_cos}, as[4] = {term.a_sin};
        for (int k = 1; k < 4; ++k) {
            ac[k] = term.eta * ac[k - 1] + term.omega * as[k - 1];
            as[k] = term.eta * as[k - 1] - term.omega * ac[k - 1];
        }
        const double e = std::exp((term.eta - gamma) * t);
        const double c = std::cos(term.omega * t);
        const double s = std::sin(term.omega * t);
        for (int k = 0; k < 4; ++k) out[k] += e * (ac[k] * c + as[k] * s);
    }
    return out;
}

// Decay-rescaled transformed-frame state and its derivative:
// q[k] = exp(-gamma t) * (u^Q, v^Q, w^Q) for k = 0, and the same rescaling
// of the time derivative for k = 1.
void eval_transformed(const ClosedFormSolution& sol, double t, Vec3& q, Vec3& qdot) {
    const double gamma = sol.params.gamma;
    const double rabi = sol.params.rabi;
    const double delta = sol.params.detuning();
    const GDerivs g = eval_g_decayed(sol, t);
    const double drive = gamma * (sol.f0 + 1.0);

    q[2] = g[0] + sol.f0;
    qdot[2] = g[1] + gamma * sol.f0;
    q[1] = (g[1] + drive) / rabi;
    qdot[1] = (g[2] + gamma * drive) / rabi;
    if (delta != 0.0) {
        q[0] = -(g[2] - 0.5 * gamma * g[1] + rabi * rabi * g[0] + sol.f1) / (delta * rabi);
        qdot[0] =
            -(g[3] - 0.5 * gamma * g[2] + rabi * rabi * g[1] + gamma * sol.f1) / (delta * rabi);
    } else {
        q[0] = sol.initial.u * std::exp(-0.5 * gamma * t);
        qdot[0] = 0.5 * gamma * q[0];
    }
}

void require_nonnegative_time(double t, const char* where) {
    if (!(t >= 0.0)) throw std::invalid_argument(std::string(where) + ": t must be >= 0");
}

}  // namespace

std::string to_string(SolutionBranch b) {
    switch (b) {
        case SolutionBranch::ZeroDetTwoReal: return "zero-detuning-two-real";
        case SolutionBranch::ZeroDetDoubleRoot: return "zero-detuning-double-root";
        case SolutionBranch::ZeroDetConjPair: return "zero-detuning-conjugate-pair";
        case SolutionBranch::TripleRoot: return "triple-root";
        case SolutionBranch::SinglePlusDouble: return "single-plus-double";
        case SolutionBranch::ThreeReal: return "three-real";
        case SolutionBranch::RealPlusConjPair: return "real-plus-conjugate-pair";
    }
    return "?";
}

ClosedFormSolution solve(const SystemParams& params, const BlochVector& initial, SolvePath path) {
    if (initial.frame != Frame::dirac)
        throw frame_mismatch_error("solve requires a dirac-frame initial vector, got " +
                                   to_string(initial.frame));
    validate_state(initial);

    const double gamma = params.gamma;
    const double rabi = params.rabi;
    const double delta = params.detuning();
    const double u0 = initial.u, v0 = initial.v, w0 = initial.w;

    ClosedFormSolution sol;
    sol.params = params;
    sol.initial = initial;

    const bool cubic_path = (delta != 0.0) || (path == SolvePath::force_cubic);
    if (!cubic_path) {
        sol.f0 = -(gamma * gamma) / (gamma * gamma + 2.0 * rabi * rabi);
        sol.f1 = 0.0;
        sol.roots = quadratic_characteristic(params);
        const double g0 = w0 - sol.f0;
        const double g1 = rabi * v0 - gamma * (sol.f0 + 1.0);

        detail::Mat<2> a{};
        switch (sol.roots.kind) {
            case RootCase::TwoRealDistinct:
                sol.branch = SolutionBranch::ZeroDetTwoReal;
                a = {{{sol.roots.lambda1, sol.roots.lambda2}, {1.0, 1.0}}};
                break;
            case RootCase::RealDouble:
                sol.branch = SolutionBranch::ZeroDetDoubleRoot;
                a = {{{sol.roots.eta, 1.0}, {1.0, 0.0}}};
                break;
            default:
                sol.branch = SolutionBranch::ZeroDetConjPair;
                a = {{{sol.roots.eta, sol.roots.omega}, {1.0, 0.0}}};
                break;
        }
        const double lam_scale = gamma + params.total_rabi();
        detail::Vec<2> c{};
        if (!solve_equilibrated<2>(a, {g1, g0}, lam_scale, c, sol.condition) ||
            sol.condition > condition_limit)
            throw degenerate_branch_error(
                "zero-detuning coefficient system ill-conditioned (D0 = " +
                std::to_string(sol.roots.D0) + ")");
        sol.c1 = c[0];
        sol.c2 = c[1];

        if (sol.branch == SolutionBranch::ZeroDetConjPair) {
            const double c1_cf = w0 - sol.f0;
            const double c2_cf =
                (rabi * v0 - sol.roots.eta * (w0 - sol.f0) - gamma * (sol.f0 + 1.0)) /
                sol.roots.omega;
            const double generic[2] = {sol.c1, sol.c2};
            const double closed[2] = {c1_cf, c2_cf};
            cross_check("zero-detuning conjugate-pair branch", generic, closed, sol.condition);
        }
    } else {
        const double denom = 4.0 * delta * delta + gamma * gamma + 2.0 * rabi * rabi;
        sol.f0 = -(4.0 * delta * delta + gamma * gamma) / denom;
        sol.f1 = -4.0 * delta * delta * rabi * rabi / denom;
        sol.roots = cubic_characteristic(params);
        const double g0 = w0 - sol.f0;
        const double g1 = rabi * v0 - gamma * (sol.f0 + 1.0);
        const double g2 = -rabi * (delta * u0 - 0.5 * gamma * v0 + rabi * w0) -
                          gamma * gamma * (sol.f0 + 1.0);

        const double lam_scale = gamma + params.total_rabi();
        const bool nondegenerate_case = sol.roots.kind == RootCase::ThreeRealDistinct ||
                                        sol.roots.kind == RootCase::OneRealPlusConjugatePair;
        // Near the triple root (D and p both inside their bands) the
        // sign-side roots are pure cube-root noise; switch to the confluent
        // form up front.  Near a plain double root the sign-side basis stays
        // accurate and is kept.
        const double tol_p =
            1e-12 * (delta * delta + rabi * rabi + gamma * gamma / 12.0);
        if (sol.roots.boundary_proximal && nondegenerate_case && std::abs(sol.roots.p) <= tol_p)
            sol.roots = degenerate_roots(params, sol.roots);

        detail::Vec<3> c{};
        double cond = 0.0;
        solve_equilibrated<3>(cubic_system(sol.roots), {g2, g1, g0}, lam_scale, c, cond);
        if (cond > condition_limit) {
            if (sol.roots.boundary_proximal && nondegenerate_case) {
                sol.roots = degenerate_roots(params, sol.roots);
                solve_equilibrated<3>(cubic_system(sol.roots), {g2, g1, g0}, lam_scale, c, cond);
            }
            if (cond > condition_limit)
                throw degenerate_branch_error(
                    "cubic coefficient system ill-conditioned: degenerate roots with D = " +
                    std::to_string(sol.roots.D) + " outside the boundary band");
        }
        sol.branch = cubic_branch(sol.roots.kind);
        sol.condition = cond;
        sol.c1 = c[0];
        sol.c2 = c[1];
        sol.c3 = c[2];

        if (sol.branch == SolutionBranch::RealPlusConjPair) {
            const double l1 = sol.roots.lambda1, eta = sol.roots.eta, om = sol.roots.omega;
            const double den_cf = (l1 - eta) * (l1 - eta) + om * om;
            const double c1_cf = (-rabi * delta * u0 + rabi * (0.5 * gamma - 2.0 * eta) * v0 +
                                  (eta * eta + om * om - rabi * rabi) * w0 +
                                  gamma * (2.0 * eta - gamma) * (sol.f0 + 1.0) -
                                  sol.f0 * (eta * eta + om * om)) /
                                 den_cf;
            const double c2_cf = w0 - sol.f0 - c1_cf;
            const double c3_cf = (rabi * v0 - eta * (w0 - sol.f0) - gamma * (sol.f0 + 1.0) +
                                  (eta - l1) * c1_cf) /
                                 om;
            const double generic[3] = {sol.c1, sol.c2, sol.c3};
            const double closed[3] = {c1_cf, c2_cf, c3_cf};
            cross_check("real-plus-conjugate-pair branch", generic, closed, sol.condition);
        }
    }

    sol.boundary = sol.roots.boundary_proximal;
    build_terms(sol);
    return sol;
}

BlochVector eval(const ClosedFormSolution& sol, double t) {
    require_nonnegative_time(t, "eval");
    Vec3 q{}, qdot{};
    eval_transformed(sol, t, q, qdot);
    const double delta = sol.params.detuning();
    const double c = std::cos(delta * t);
    const double s = std::sin(delta * t);
    BlochVector out;
    out.u = c * q[0] - s * q[1];
    out.v = s * q[0] + c * q[1];
    out.w = q[2];
    out.frame = Frame::dirac;
    return out;
}

double eval_w(const ClosedFormSolution& sol, double t) {
    const double gamma = sol.params.gamma;
    double w = sol.f0;
    for (int n = 0; n < sol.n_poly_terms; ++n) {
        const PolyExpTerm& term = sol.poly_terms[n];
        w += std::exp((term.lambda - gamma) * t) * ((term.a2 * t + term.a1) * t + term.a0);
    }
    if (sol.has_osc) {
        const OscTerm& term = sol.osc_term;
        w += std::exp((term.eta - gamma) * t) * (term.a_cos * std::cos(term.omega * t) +
                                                 term.a_sin * std::sin(term.omega * t));
    }
    return w;
}

double excited_population_raw(const ClosedFormSolution& sol, double t) {
    require_nonnegative_time(t, "excited_population");
    return 0.5 * (1.0 + eval_w(sol, t));
}

double excited_population(const ClosedFormSolution& sol, double t) {
    const double raw = excited_population_raw(sol, t);
    if (raw < -1e-8 || raw > 1.0 + 1e-8)
        throw physicality_error("excited population " + std::to_string(raw) +
                                " outside [0, 1] beyond tolerance at t = " + std::to_string(t));
    return std::clamp(raw, 0.0, 1.0);
}

BlochVector rabi_limit(const SystemParams& params, const BlochVector& initial, double t) {
    if (params.gamma != 0.0)
        throw std::invalid_argument("rabi_limit requires gamma == 0");
    if (initial.frame != Frame::dirac)
        throw frame_mismatch_error("rabi_limit requires a dirac-frame initial vector");
    validate_state(initial);
    require_nonnegative_time(t, "rabi_limit");

    // Without decay the transformed frame rotates rigidly about the torque
    // axis (rabi, 0, -delta) / omega_R at rate omega_R.
    const double delta = params.detuning();
    const double omega_r = params.total_rabi();
    const double ax = params.rabi / omega_r;
    const double az = -delta / omega_r;
    const double theta = omega_r * t;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);

    const double dot = ax * initial.u + az * initial.w;
    // axis x r with axis = (ax, 0, az)
    const double cx = -az * initial.v;
    const double cy = az * initial.u - ax * initial.w;
    const double cz = ax * initial.v;

    const double uq = initial.u * ct + cx * st + ax * dot * (1.0 - ct);
    const double vq = initial.v * ct + cy * st;
    const double wq = initial.w * ct + cz * st + az * dot * (1.0 - ct);

    const double c = std::cos(delta * t);
    const double s = std::sin(delta * t);
    BlochVector out;
    out.u = c * uq - s * vq;
    out.v = s * uq + c * vq;
    out.w = wq;
    out.frame = Frame::dirac;
    return out;
}

Vec3 bloch_ode_residual(const ClosedFormSolution& sol, double t) {
    require_nonnegative_time(t, "bloch_ode_residual");
    const double gamma = sol.params.gamma;
    const double rabi = sol.params.rabi;
    const double delta = sol.params.detuning();

    Vec3 q{}, qdot{};
    eval_transformed(sol, t, q, qdot);
    const double c = std::cos(delta * t);
    const double s = std::sin(delta * t);

    const double u = c * q[0] - s * q[1];
    const double v = s * q[0] + c * q[1];
    const double w = q[2];

    // R = P R^Q with P = exp(-gamma t) Rz(delta t); the product rule gives
    // R' in terms of the rescaled transformed state and its derivative.
    const double du = -gamma * u - delta * v + (c * qdot[0] - s * qdot[1]);
    const double dv = -gamma * v + delta * u + (s * qdot[0] + c * qdot[1]);
    const double dw = -gamma * w + qdot[2];

    return Vec3{du - (-0.5 * gamma * u + rabi * s * w),
                dv - (-0.5 * gamma * v - rabi * c * w),
                dw - (-rabi * s * u + rabi * c * v - gamma * w - gamma)};
}

Mat3 bloch_coefficient_matrix(const SystemParams& params, double t) {
    const double gamma = params.gamma;
    const double rabi = params.rabi;
    const double delta = params.detuning();
    const double s = std::sin(delta * t);
    const double c = std::cos(delta * t);
    return Mat3{{{-0.5 * gamma, 0.0, rabi * s},
                 {0.0, -0.5 * gamma, -rabi * c},
                 {-rabi * s, rabi * c, -gamma}}};
}

Vec3 bloch_drive(const SystemParams& params) { return Vec3{0.0, 0.0, -params.gamma}; }

Mat3 transformation_matrix(const SystemParams& params, double t) {
    const double e = std::exp(-params.gamma * t);
    const double c = std::cos(params.detuning() * t);
    const double s = std::sin(params.detuning() * t);
    return Mat3{{{e * c, -e * s, 0.0}, {e * s, e * c, 0.0}, {0.0, 0.0, e}}};
}

Mat3 transformation_matrix_dt(const SystemParams& params, double t) {
    const double gamma = params.gamma;
    const double delta = params.detuning();
    const double e = std::exp(-gamma * t);
    const double c = std::cos(delta * t);
    const double s = std::sin(delta * t);
    return Mat3{{{e * (-gamma * c - delta * s), e * (gamma * s - delta * c), 0.0},
                 {e * (-gamma * s + delta * c), e * (-gamma * c - delta * s), 0.0},
                 {0.0, 0.0, -gamma * e}}};
}

Mat3 transformed_coefficient_matrix(const SystemParams& params) {
    const double gamma = params.gamma;
    const double delta = params.detuning();
    return Mat3{{{0.5 * gamma, delta, 0.0},
                 {-delta, 0.5 * gamma, -params.rabi},
                 {0.0, params.rabi, 0.0}}};
}

Mat3 transformed_coefficient_matrix_from_transform(const SystemParams& params, double t) {
    const auto mul = [](const Mat3& a, const Mat3& b) {
        Mat3 out{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
        return out;
    };
    const double e = std::exp(params.gamma * t);
    const double c = std::cos(params.detuning() * t);
    const double s = std::sin(params.detuning() * t);
    const Mat3 p_inv{{{e * c, e * s, 0.0}, {-e * s, e * c, 0.0}, {0.0, 0.0, e}}};
    const Mat3 m = bloch_coefficient_matrix(params, t);
    const Mat3 p = transformation_matrix(params, t);
    const Mat3 p_dt = transformation_matrix_dt(params, t);
    Mat3 diff = mul(m, p);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) diff[i][j] -= p_dt[i][j];
    return mul(p_inv, diff);
}

Vec3 transformed_drive(const SystemParams& params, double t) {
    return Vec3{0.0, 0.0, -params.gamma * std::exp(params.gamma * t)};
}

}  // namespace qclock
