// Dynamical-regime classification (Rabi / damped oscillation / overdamped)
// and the phase diagram in the (gamma/rabi, delta/rabi) plane with its
// boundary curves.

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "qclock/core.hpp"

namespace qclock {

// Damped-oscillation criterion polynomial
//   delta^2 gamma^4 + (8 delta^4 - 20 delta^2 rabi^2 - rabi^4) gamma^2
//     + 16 (delta^2 + rabi^2)^3,
// equal to 432 times the cubic discriminant; positive means oscillating.
double oscillation_criterion(const SystemParams& params);

// gamma = 0 is the Rabi line; otherwise the criterion sign decides, with a
// scale-relative band around zero classified as Boundary.
Regime classify(const SystemParams& params);

enum class BoundaryCurve { b1, b2, b3 };

std::string to_string(BoundaryCurve c);

// Largest |delta/rabi| for which the boundary curves exist, 1/(2 sqrt 2).
double boundary_domain_limit();

// gamma/rabi on the printed boundary curve at the given delta/rabi.
// Throws std::domain_error naming the curve outside its domain
// (b2: |d| <= 1/(2 sqrt 2); b1: 0 < d; b3: d < 0).
double boundary_gamma(BoundaryCurve curve, double delta_over_rabi);

struct PhaseDiagram {
    struct Curve {
        std::string name;
        // (gamma/rabi, delta/rabi) pairs
        std::vector<std::array<double, 2>> points;
    };

    // Regime grid, row-major over delta then gamma:
    // grid[i_delta * gamma_over_rabi.size() + i_gamma].
    std::vector<double> gamma_over_rabi;
    std::vector<double> delta_over_rabi;
    std::vector<Regime> grid;

    std::vector<Curve> curves;
    std::array<double, 2> intersection_b1_b2{};  // (gamma/rabi, delta/rabi)
    std::array<double, 2> intersection_b1_b3{};
};

// Boundary polylines sampled on the given delta/rabi grid (all values must
// lie within the curve domain); b1 takes the positive entries, b3 the
// negative ones, b2 all of them.
PhaseDiagram boundary_curves(std::span<const double> delta_over_rabi_grid);

struct PhaseGridSpec {
    double gamma_max = 6.0;
    int n_gamma = 601;
    double delta_min = -1.0;
    double delta_max = 1.0;
    int n_delta = 601;
};

// Full diagram: regime grid plus boundary curves clipped to the grid range.
PhaseDiagram phase_diagram(const PhaseGridSpec& spec);

// Verify that regime changes along each fixed-delta grid row happen only
// within one cell of gamma = 0 or a boundary curve, and that each expected
// crossing flips the classification exactly once.
bool grid_flips_match_boundaries(const PhaseDiagram& pd, std::string* detail = nullptr);

}  // namespace qclock
