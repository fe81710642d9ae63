// Independent numerical integrators used as ground truth for the analytic
// solver: a fixed-step RK4 and an adaptive RK45 (Cash-Karp), applied to the
// dirac-frame Bloch equations and to the dirac-picture density-matrix
// master equation.  Fixed-step runs step exactly to each requested output
// time and are bitwise deterministic.

#pragma once

#include <span>
#include <vector>

#include "qclock/core.hpp"

namespace qclock {

struct stiffness_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class IntegratorMethod { RK4, RK45Adaptive };

struct IntegratorConfig {
    double step = 0.0;  // fixed step (RK4) or initial step (RK45)
    IntegratorMethod method = IntegratorMethod::RK4;
    double abs_tol = 1e-12;  // adaptive only
    double rel_tol = 1e-12;  // adaptive only

    // Default fixed step: 1e-3 of the total-Rabi period, additionally capped
    // at 0.01 * min(2 pi / omega_R, 1 / gamma).
    static IntegratorConfig defaults_for(const SystemParams& params);
};

// Integrate the Bloch equations
//   u' = -gamma/2 u + rabi sin(delta t) w
//   v' = -gamma/2 v - rabi cos(delta t) w
//   w' = -rabi sin(delta t) u + rabi cos(delta t) v - gamma w - gamma
// from t = 0 and return the state at each requested time.  Times must be
// strictly increasing with times[0] >= 0.
std::vector<BlochVector> integrate_bloch(const SystemParams& params, const BlochVector& initial,
                                         std::span<const double> times,
                                         const IntegratorConfig& cfg);

// Integrate the dirac-picture master equation on the raw four complex
// matrix entries (no Hermiticity assumption; its preservation is a check on
// the equations, not an input).
std::vector<DensityMatrix> integrate_density(const SystemParams& params,
                                             const DensityMatrix& initial,
                                             std::span<const double> times,
                                             const IntegratorConfig& cfg);

}  // namespace qclock
