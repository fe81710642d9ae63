// Test-only polynomial root oracle: Weierstrass (Durand-Kerner)
// simultaneous iteration on the monic polynomial.  Shares no code or case
// analysis with the library's closed-form solvers, so it can sit on the
// other side of equality checks.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace test_oracle {

using cplx = std::complex<double>;

// p(z) = z^n + coeffs[n-1] z^{n-1} + ... + coeffs[0].
inline cplx eval_monic(std::span<const double> coeffs, cplx z) {
    cplx acc{1.0, 0.0};
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

inline std::vector<cplx> weierstrass_roots(std::span<const double> coeffs) {
    const std::size_t n = coeffs.size();
    double bound = 1.0;
    for (const double c : coeffs) bound = std::max(bound, std::abs(c));
    bound += 1.0;  // Cauchy bound on the root magnitudes

    std::vector<cplx> z(n);
    const cplx seed{0.4, 0.9};
    cplx power{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        power *= seed;
        z[i] = bound * power;
    }

    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            const cplx step = eval_monic(coeffs, z[i]) / denom;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15 * bound) break;
    }
    return z;
}

// Distance from z to the nearest element of the root set.
inline double nearest_root_distance(const std::vector<cplx>& roots, cplx z) {
    double best = 1e300;
    for (const cplx r : roots) best = std::min(best, std::abs(r - z));
    return best;
}

}  // namespace test_oracle
