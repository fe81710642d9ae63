#include "qclock/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qclock {

namespace {

// Reference parameters for normalized (gamma/rabi, delta/rabi) queries;
// classification is scale-invariant so the absolute unit does not matter.
SystemParams normalized_params(double gamma_over_rabi, double delta_over_rabi) {
    return SystemParams::from_detuning(10.0, delta_over_rabi, 1.0, gamma_over_rabi);
}

}  // namespace

double oscillation_criterion(const SystemParams& params) {
    const double g2 = params.gamma * params.gamma;
    const double d2 = params.detuning() * params.detuning();
    const double o2 = params.rabi * params.rabi;
    const double s = d2 + o2;
    return d2 * g2 * g2 + (8.0 * d2 * d2 - 20.0 * d2 * o2 - o2 * o2) * g2 +
           16.0 * s * s * s;
}

Regime classify(const SystemParams& params) {
    if (params.gamma == 0.0) return Regime::RabiOscillation;
    const double value = oscillation_criterion(params);
    // Boundary band: relative to the magnitudes of the criterion's terms,
    // which is what bounds its cancellation noise.  Inside the diagram range
    // this is within a small factor of 16 (delta^2 + rabi^2)^3.
    const double g2 = params.gamma * params.gamma;
    const double d2 = params.detuning() * params.detuning();
    const double o2 = params.rabi * params.rabi;
    const double s = d2 + o2;
    const double scale = d2 * g2 * g2 + std::abs(8.0 * d2 * d2 - 20.0 * d2 * o2 - o2 * o2) * g2 +
                         16.0 * s * s * s;
    if (std::abs(value) <= 1e-10 * scale) return Regime::Boundary;
    return value > 0.0 ? Regime::DampedOscillation : Regime::Overdamped;
}

std::string to_string(BoundaryCurve c) {
    switch (c) {
        case BoundaryCurve::b1: return "b1";
        case BoundaryCurve::b2: return "b2";
        case BoundaryCurve::b3: return "b3";
    }
    return "?";
}

double boundary_domain_limit() { return 1.0 / (2.0 * std::sqrt(2.0)); }

double boundary_gamma(BoundaryCurve curve, double d) {
    const double dmax = boundary_domain_limit();
    const auto domain_error_for = [&](const char* domain) {
        std::ostringstream os;
        os << "delta/rabi = " << d << " outside the domain of curve " << to_string(curve) << " ("
           << domain << ")";
        return std::domain_error(os.str());
    };
    if (curve == BoundaryCurve::b1 && !(d > 0.0 && d <= dmax))
        throw domain_error_for("0 < delta/rabi <= 1/(2 sqrt 2)");
    if (curve == BoundaryCurve::b3 && !(d < 0.0 && d >= -dmax))
        throw domain_error_for("-1/(2 sqrt 2) <= delta/rabi < 0");
    if (curve == BoundaryCurve::b2 && !(std::abs(d) <= dmax))
        throw domain_error_for("|delta/rabi| <= 1/(2 sqrt 2)");

    const double d2 = d * d;
    const double s = std::sqrt(std::max(0.0, 1.0 - 8.0 * d2));
    double g2;
    if (curve == BoundaryCurve::b2) {
        g2 = 14.0 - 4.0 * d2 + 4.0 * (1.0 - 8.0 * d2) / (1.0 + s);
    } else {
        // The printed form divides by 1 - s, which cancels badly as d -> 0;
        // multiply through by (1 + s)/(1 + s) so the denominator is 8 d^2.
        g2 = 14.0 - 4.0 * d2 + (1.0 - 8.0 * d2) * (1.0 + s) / (2.0 * d2);
    }
    return std::sqrt(g2);
}

PhaseDiagram boundary_curves(std::span<const double> delta_over_rabi_grid) {
    const double dmax = boundary_domain_limit();
    PhaseDiagram pd;
    PhaseDiagram::Curve b1{"b1", {}}, b2{"b2", {}}, b3{"b3", {}};
    for (const double d : delta_over_rabi_grid) {
        b2.points.push_back({boundary_gamma(BoundaryCurve::b2, d), d});
        if (d > 0.0) b1.points.push_back({boundary_gamma(BoundaryCurve::b1, d), d});
        if (d < 0.0) b3.points.push_back({boundary_gamma(BoundaryCurve::b3, d), d});
    }
    pd.curves = {b1, b2, b3};
    // The curve families meet at the domain endpoints; emit the evaluated
    // endpoint values rather than hard-coded constants.
    pd.intersection_b1_b2 = {boundary_gamma(BoundaryCurve::b2, dmax), dmax};
    pd.intersection_b1_b3 = {boundary_gamma(BoundaryCurve::b2, -dmax), -dmax};
    return pd;
}

PhaseDiagram phase_diagram(const PhaseGridSpec& spec) {
    if (spec.n_gamma < 2 || spec.n_delta < 2)
        throw std::invalid_argument("phase_diagram: grid needs at least 2 points per axis");
    const double dmax = boundary_domain_limit();

    std::vector<double> curve_deltas;
    for (int i = 0; i < spec.n_delta; ++i) {
        const double d = spec.delta_min +
                         (spec.delta_max - spec.delta_min) * i / double(spec.n_delta - 1);
        if (std::abs(d) <= dmax) curve_deltas.push_back(d);
    }
    // Always include the endpoints where the curve families meet.
    curve_deltas.push_back(-dmax);
    curve_deltas.push_back(dmax);
    std::sort(curve_deltas.begin(), curve_deltas.end());

    PhaseDiagram pd = boundary_curves(curve_deltas);
    pd.gamma_over_rabi.resize(spec.n_gamma);
    pd.delta_over_rabi.resize(spec.n_delta);
    for (int i = 0; i < spec.n_gamma; ++i)
        pd.gamma_over_rabi[i] = spec.gamma_max * i / double(spec.n_gamma - 1);
    for (int i = 0; i < spec.n_delta; ++i)
        pd.delta_over_rabi[i] =
            spec.delta_min + (spec.delta_max - spec.delta_min) * i / double(spec.n_delta - 1);
    if (spec.delta_min == -spec.delta_max) {
        // mirror the axis so the exported grid is exactly even in the
        // detuning (naive linspace endpoints are not negatives of each other)
        for (int i = 0; i < spec.n_delta / 2; ++i)
            pd.delta_over_rabi[i] = -pd.delta_over_rabi[spec.n_delta - 1 - i];
        if (spec.n_delta % 2 == 1) pd.delta_over_rabi[spec.n_delta / 2] = 0.0;
    }

    pd.grid.resize(std::size_t(spec.n_gamma) * spec.n_delta);
    for (int i = 0; i < spec.n_delta; ++i)
        for (int j = 0; j < spec.n_gamma; ++j)
            pd.grid[std::size_t(i) * spec.n_gamma + j] =
                classify(normalized_params(pd.gamma_over_rabi[j], pd.delta_over_rabi[i]));
    return pd;
}

bool grid_flips_match_boundaries(const PhaseDiagram& pd, std::string* detail) {
    const double dmax = boundary_domain_limit();
    const std::size_t ng = pd.gamma_over_rabi.size();
    if (ng < 2 || pd.grid.size() != ng * pd.delta_over_rabi.size()) {
        if (detail) *detail = "phase diagram carries no usable grid";
        return false;
    }
    const double cell = pd.gamma_over_rabi[1] - pd.gamma_over_rabi[0];

    // Every cell farther than one cell from gamma = 0 and from the boundary
    // curves has a regime dictated by the curve geometry; any mismatch there
    // would be an isolated flip.
    for (std::size_t i = 0; i < pd.delta_over_rabi.size(); ++i) {
        const double d = pd.delta_over_rabi[i];
        double g_b2 = std::numeric_limits<double>::infinity();
        double g_b13 = std::numeric_limits<double>::infinity();
        if (std::abs(d) <= dmax) {
            g_b2 = boundary_gamma(BoundaryCurve::b2, d);
            if (d != 0.0)
                g_b13 = boundary_gamma(d > 0.0 ? BoundaryCurve::b1 : BoundaryCurve::b3, d);
        }
        for (std::size_t j = 0; j < ng; ++j) {
            const double g = pd.gamma_over_rabi[j];
            Regime expect;
            if (g == 0.0) {
                expect = Regime::RabiOscillation;
            } else if (std::abs(g - g_b2) <= cell || std::abs(g - g_b13) <= cell || g <= cell) {
                continue;  // within one cell of a boundary: unconstrained
            } else if (g > g_b2 && g < g_b13) {
                expect = Regime::Overdamped;
            } else {
                expect = Regime::DampedOscillation;
            }
            if (pd.grid[i * ng + j] != expect) {
                if (detail) {
                    std::ostringstream os;
                    os << "cell (gamma/rabi = " << g << ", delta/rabi = " << d << ") classifies as "
                       << to_string(pd.grid[i * ng + j]) << " but the curves imply "
                       << to_string(expect);
                    *detail = os.str();
                }
                return false;
            }
        }
    }
    if (detail) detail->clear();
    return true;
}

}  // namespace qclock
