// Closed-form solutions of the dirac-frame Bloch equations with spontaneous
// emission.  The dynamics are reduced, through the decay-rescaled rotating
// transformation R = P(t) R^Q, to a constant-coefficient linear system; the
// population component w^Q then obeys a second-order ODE at zero detuning
// and a third-order ODE otherwise.  solve() picks the branch from the
// characteristic-equation discriminant, determines the coefficients from
// the initial conditions, and eval() reconstructs (u, v, w) at any time
// with analytic derivatives throughout.
//
// Everything is evaluated in decay-rescaled form (exponents shifted by
// -gamma), so no intermediate ever carries a growing exp(gamma t) factor.

#pragma once

#include <array>

#include "qclock/core.hpp"
#include "qclock/poly_roots.hpp"

namespace qclock {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

enum class SolutionBranch {
    ZeroDetTwoReal,     // detuning 0, two distinct real roots
    ZeroDetDoubleRoot,  // detuning 0, double root
    ZeroDetConjPair,    // detuning 0, conjugate pair (damped oscillation)
    TripleRoot,         // cubic path, D = 0, p = 0
    SinglePlusDouble,   // cubic path, D = 0, p != 0
    ThreeReal,          // cubic path, D < 0 (overdamped)
    RealPlusConjPair    // cubic path, D > 0 (damped oscillation)
};

std::string to_string(SolutionBranch b);

// One homogeneous term exp(lambda t) * (a0 + a1 t + a2 t^2).
struct PolyExpTerm {
    double lambda = 0.0;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
};

// One oscillatory term exp(eta t) * (a_cos cos(omega t) + a_sin sin(omega t)).
struct OscTerm {
    double eta = 0.0, omega = 0.0;
    double a_cos = 0.0, a_sin = 0.0;
};

struct ClosedFormSolution {
    SystemParams params{};
    RootStructure roots{};
    SolutionBranch branch = SolutionBranch::ZeroDetConjPair;

    // Coefficients of the homogeneous part (c3 unused on the quadratic
    // branches) and the special-solution constants; eval() reads f0/f1 live.
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double f0 = 0.0;
    double f1 = 0.0;  // zero on the quadratic branches

    BlochVector initial{};    // dirac frame
    bool boundary = false;     // parameters within the discriminant boundary band
    double condition = 0.0;    // condition estimate of the coefficient solve

    // Homogeneous part of w^Q - f0 exp(gamma t), prebuilt from the branch.
    std::array<PolyExpTerm, 3> poly_terms{};
    int n_poly_terms = 0;
    OscTerm osc_term{};
    bool has_osc = false;
};

enum class SolvePath { automatic, force_cubic };

// Build the closed-form solution for a dirac-frame initial state inside the
// unit ball.  force_cubic routes a zero-detuning problem through the cubic
// machinery (the two must agree; used by consistency checks).
ClosedFormSolution solve(const SystemParams& params, const BlochVector& initial,
                         SolvePath path = SolvePath::automatic);

// Dirac-frame Bloch vector at time t >= 0.
BlochVector eval(const ClosedFormSolution& sol, double t);

// Population component only (cheap path for spectrum scans; the caller
// keeps t >= 0).
double eval_w(const ClosedFormSolution& sol, double t);

// Excited-state population (1 + w)/2, clamped to [0, 1].  Throws
// physicality_error if the raw value strays outside [-1e-8, 1 + 1e-8].
double excited_population(const ClosedFormSolution& sol, double t);
double excited_population_raw(const ClosedFormSolution& sol, double t);

// Exact gamma = 0 evolution (rotation about the torque axis in the
// transformed frame), independent of the generic solver.  Throws
// std::invalid_argument unless params.gamma == 0.
BlochVector rabi_limit(const SystemParams& params, const BlochVector& initial, double t);

// Residual of the Bloch equations at time t for the evaluated closed form,
// with all derivatives taken analytically: returns R'(t) - (M(t) R(t) + R0).
Vec3 bloch_ode_residual(const ClosedFormSolution& sol, double t);

// Pieces of the linear transformation, exposed for verification.
Mat3 bloch_coefficient_matrix(const SystemParams& params, double t);   // M(t)
Vec3 bloch_drive(const SystemParams& params);                          // R0
Mat3 transformation_matrix(const SystemParams& params, double t);      // P(t)
Mat3 transformation_matrix_dt(const SystemParams& params, double t);   // P'(t)
Mat3 transformed_coefficient_matrix(const SystemParams& params);       // F (constant)
// F computed the long way round, P^{-1}(M P - P'), for checking that the
// transformation really removes the time dependence.
Mat3 transformed_coefficient_matrix_from_transform(const SystemParams& params, double t);
Vec3 transformed_drive(const SystemParams& params, double t);          // G(t)

}  // namespace qclock
