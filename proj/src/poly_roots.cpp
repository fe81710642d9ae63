#include "qclock/poly_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qclock {

namespace {

// Scale-relative boundary band for the cubic discriminant.  The
// discriminant of a cubic with roots of magnitude Lambda scales as
// Lambda^6, and delta^2 + rabi^2 + gamma^2/12 tracks Lambda^2 for this
// family, so the band follows its cube; measuring D against q^2 or |p|^3
// alone would miss the triple-root point where both vanish together.
double cubic_boundary_tol(const SystemParams& params) {
    const double delta = params.detuning();
    const double scale =
        delta * delta + params.rabi * params.rabi + params.gamma * params.gamma / 12.0;
    return 1e-12 * scale * scale * scale;
}

double quadratic_boundary_tol(const SystemParams& params) {
    const double scale = 0.25 * params.gamma * params.gamma + 4.0 * params.rabi * params.rabi;
    return 1e-12 * scale;
}

// One Newton step on the monic cubic restores full relative accuracy for
// small real roots, where the shifted closed forms cancel.  Only applied
// away from the discriminant boundary, where the derivative is healthy.
double polish_cubic_root(const SystemParams& params, double lambda) {
    const double delta = params.detuning();
    const double b = delta * delta + params.rabi * params.rabi + 0.25 * params.gamma * params.gamma;
    const double c = 0.5 * params.rabi * params.rabi * params.gamma;
    const double f = ((lambda - params.gamma) * lambda + b) * lambda - c;
    const double fp = (3.0 * lambda - 2.0 * params.gamma) * lambda + b;
    if (fp == 0.0) return lambda;
    return lambda - f / fp;
}

}  // namespace

std::string to_string(RootCase c) {
    switch (c) {
        case RootCase::TwoRealDistinct: return "two-real-distinct";
        case RootCase::RealDouble: return "real-double";
        case RootCase::ConjugatePair: return "conjugate-pair";
        case RootCase::TripleRoot: return "triple-root";
        case RootCase::SingleRealPlusDouble: return "single-plus-double";
        case RootCase::ThreeRealDistinct: return "three-real-distinct";
        case RootCase::OneRealPlusConjugatePair: return "real-plus-conjugate-pair";
    }
    return "?";
}

RootStructure quadratic_characteristic(const SystemParams& params) {
    const double gamma = params.gamma;
    const double rabi = params.rabi;

    RootStructure out;
    out.degree = 2;
    out.D0 = 0.25 * gamma * gamma - 4.0 * rabi * rabi;

    const double tol = quadratic_boundary_tol(params);
    if (std::abs(out.D0) <= tol) {
        out.kind = RootCase::RealDouble;
        out.eta = 0.25 * gamma;
        out.lambda1 = out.lambda2 = out.eta;
        out.boundary_proximal = true;
    } else if (out.D0 > 0.0) {
        out.kind = RootCase::TwoRealDistinct;
        // Larger root by the direct formula, smaller via the product
        // lambda1*lambda2 = rabi^2 to avoid cancellation.
        out.lambda1 = 0.25 * gamma + 0.5 * std::sqrt(out.D0);
        out.lambda2 = rabi * rabi / out.lambda1;
    } else {
        out.kind = RootCase::ConjugatePair;
        out.eta = 0.25 * gamma;
        out.omega = 0.5 * std::sqrt(-out.D0);
    }
    return out;
}

RootStructure cubic_characteristic(const SystemParams& params) {
    const double gamma = params.gamma;
    const double rabi = params.rabi;
    const double delta = params.detuning();

    RootStructure out;
    out.degree = 3;
    out.p = delta * delta + rabi * rabi - gamma * gamma / 12.0;
    out.q = gamma * (36.0 * delta * delta - 18.0 * rabi * rabi + gamma * gamma) / 108.0;
    out.D = 0.25 * out.q * out.q + out.p * out.p * out.p / 27.0;

    const double shift = gamma / 3.0;
    const double tol_D = cubic_boundary_tol(params);
    const double tol_p = 1e-12 * (delta * delta + rabi * rabi + gamma * gamma / 12.0);
    out.boundary_proximal = std::abs(out.D) <= tol_D;

    // Case selection: sign of D away from the boundary band; inside the
    // band the sign still decides (the degenerate forms are reserved for an
    // exact zero, which only arises by construction).
    if (out.D == 0.0) {
        if (std::abs(out.p) <= tol_p) {
            out.kind = RootCase::TripleRoot;
            out.lambda1 = out.lambda2 = out.lambda3 = shift;
        } else {
            out.kind = RootCase::SingleRealPlusDouble;
            out.lambda1 = shift - std::cbrt(4.0 * out.q);
            out.lambda2 = out.lambda3 = shift + std::cbrt(0.5 * out.q);
        }
        out.boundary_proximal = true;
    } else if (out.D < 0.0) {
        out.kind = RootCase::ThreeRealDistinct;
        out.r = 2.0 * std::sqrt(-out.p / 3.0);
        const double arg = std::clamp(-4.0 * out.q / (out.r * out.r * out.r), -1.0, 1.0);
        out.phi = std::acos(arg);
        const double two_pi = 2.0 * std::numbers::pi;
        double roots[3] = {shift + out.r * std::cos(out.phi / 3.0),
                           shift + out.r * std::cos((out.phi + two_pi) / 3.0),
                           shift + out.r * std::cos((out.phi - two_pi) / 3.0)};
        if (!out.boundary_proximal)
            for (double& root : roots) root = polish_cubic_root(params, root);
        std::sort(roots, roots + 3, std::greater<>());
        out.lambda1 = roots[0];
        out.lambda2 = roots[1];
        out.lambda3 = roots[2];
    } else {
        out.kind = RootCase::OneRealPlusConjugatePair;
        const double sqrt_D = std::sqrt(out.D);
        // -q/2 + sqrt(D) and -q/2 - sqrt(D) multiply to -p^3/27; taking the
        // cube root of the larger one and dividing out avoids the
        // cancellation that hits the direct form near p = 0.
        if (out.q <= 0.0) {
            out.R1 = std::cbrt(-0.5 * out.q + sqrt_D);
            out.R2 = out.R1 != 0.0 ? -out.p / (3.0 * out.R1) : 0.0;
        } else {
            out.R2 = std::cbrt(-0.5 * out.q - sqrt_D);
            out.R1 = out.R2 != 0.0 ? -out.p / (3.0 * out.R2) : 0.0;
        }
        out.lambda1 = shift + out.R1 + out.R2;
        if (!out.boundary_proximal) out.lambda1 = polish_cubic_root(params, out.lambda1);
        out.eta = shift - 0.5 * (out.R1 + out.R2);
        out.omega = 0.5 * std::sqrt(3.0) * (out.R1 - out.R2);
    }

    if (delta == 0.0) {
        out.D0 = 0.25 * gamma * gamma - 4.0 * rabi * rabi;
        if (out.kind == RootCase::OneRealPlusConjugatePair && out.D0 < 0.0) {
            // Zero-detuning consistency intermediates: with
            // x = sqrt(-D0)/(2 rabi) the pair frequency reduces to
            // omega = rabi * x = (S1 + S2) rabi / 2.
            const double x = 0.5 * std::sqrt(-out.D0) / rabi;
            const double root_term =
                std::sqrt(3.0) / 9.0 * (1.0 + 8.0 * x * x) * std::sqrt(std::max(0.0, 1.0 - x * x));
            out.S1 = std::cbrt(x + root_term);
            out.S2 = std::cbrt(x - root_term);
        }
    }
    return out;
}

std::complex<double> quadratic_charpoly(const SystemParams& params, std::complex<double> z) {
    return z * z - 0.5 * params.gamma * z + params.rabi * params.rabi;
}

std::complex<double> cubic_charpoly(const SystemParams& params, std::complex<double> z) {
    const double delta = params.detuning();
    const double b = delta * delta + params.rabi * params.rabi + 0.25 * params.gamma * params.gamma;
    const double c = 0.5 * params.rabi * params.rabi * params.gamma;
    return ((z - params.gamma) * z + b) * z - c;
}

double quadratic_charpoly_scale(const SystemParams& params, std::complex<double> z) {
    const double az = std::abs(z);
    return az * az + 0.5 * params.gamma * az + params.rabi * params.rabi;
}

double cubic_charpoly_scale(const SystemParams& params, std::complex<double> z) {
    const double delta = params.detuning();
    const double b = delta * delta + params.rabi * params.rabi + 0.25 * params.gamma * params.gamma;
    const double c = 0.5 * params.rabi * params.rabi * params.gamma;
    const double az = std::abs(z);
    return az * az * az + params.gamma * az * az + b * az + c;
}

}  // namespace qclock
