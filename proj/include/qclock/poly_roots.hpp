// Closed-form root solvers for the two characteristic equations of the
// transformed Bloch dynamics:
//
//   zero detuning:     lambda^2 - (gamma/2) lambda + rabi^2 = 0
//   nonzero detuning:  lambda^3 - gamma lambda^2
//                        + (delta^2 + rabi^2 + gamma^2/4) lambda
//                        - rabi^2 gamma / 2 = 0
//
// The cubic is solved through the depressed form lambda'^3 + p lambda' + q
// with lambda = lambda' + gamma/3; the case split follows the discriminant
// D = q^2/4 + p^3/27.  Cube roots of negative reals are always taken as the
// real (sign-preserving) branch.

#pragma once

#include <complex>

#include "qclock/core.hpp"

namespace qclock {

enum class RootCase {
    TwoRealDistinct,          // quadratic, D0 > 0
    RealDouble,               // quadratic, D0 = 0
    ConjugatePair,            // quadratic, D0 < 0
    TripleRoot,               // cubic, D = 0 and p = 0
    SingleRealPlusDouble,     // cubic, D = 0 and p != 0
    ThreeRealDistinct,        // cubic, D < 0
    OneRealPlusConjugatePair  // cubic, D > 0
};

std::string to_string(RootCase c);

struct RootStructure {
    RootCase kind = RootCase::ConjugatePair;
    int degree = 2;  // 2 (zero detuning) or 3 (cubic path)

    // Real roots where the case provides them.  For ThreeRealDistinct the
    // canonical order is descending: lambda1 >= lambda2 >= lambda3.  For
    // SingleRealPlusDouble lambda1 is the single root and lambda2 = lambda3
    // the double one.  For RealDouble/TripleRoot all stored roots coincide.
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;

    // Complex pair eta +- i*omega (omega >= 0) where the case provides one.
    double eta = 0.0;
    double omega = 0.0;

    // Intermediates of the solve, kept for diagnostics and cross-checks.
    double p = 0.0;   // depressed-cubic linear coefficient
    double q = 0.0;   // depressed-cubic constant
    double D = 0.0;   // cubic discriminant q^2/4 + p^3/27
    double D0 = 0.0;  // quadratic discriminant gamma^2/4 - 4 rabi^2
    double r = 0.0;   // trigonometric radius 2 sqrt(-p/3)
    double phi = 0.0; // trigonometric angle acos(-4q/r^3)
    double R1 = 0.0;  // Cardano cube roots for D > 0
    double R2 = 0.0;
    double S1 = 0.0;  // zero-detuning consistency cube roots (set when
    double S2 = 0.0;  // detuning == 0 and the cubic path yields a pair)

    // True when |D| (or |D0|) falls inside the scale-relative boundary band;
    // the stored case is then the sign-side classification.
    bool boundary_proximal = false;
};

// Characteristic roots of the zero-detuning (quadratic) equation.  The
// caller guarantees detuning == 0; only rabi and gamma enter.
RootStructure quadratic_characteristic(const SystemParams& params);

// Characteristic roots of the cubic equation; valid for any detuning
// (the zero-detuning limit factors through it consistently).
RootStructure cubic_characteristic(const SystemParams& params);

// Characteristic polynomials evaluated at z, for residual checks.
std::complex<double> quadratic_charpoly(const SystemParams& params, std::complex<double> z);
std::complex<double> cubic_charpoly(const SystemParams& params, std::complex<double> z);

// Magnitude scale of the polynomial's terms at z, for scale-relative
// residual tests.
double quadratic_charpoly_scale(const SystemParams& params, std::complex<double> z);
double cubic_charpoly_scale(const SystemParams& params, std::complex<double> z);

}  // namespace qclock
