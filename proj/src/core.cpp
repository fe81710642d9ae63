#include "qclock/core.hpp"

#include <cmath>
#include <sstream>

namespace qclock {

std::string to_string(Frame f) {
    switch (f) {
        case Frame::lab: return "lab";
        case Frame::dirac: return "dirac";
        case Frame::transformed: return "transformed";
    }
    return "?";
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::RabiOscillation: return "rabi";
        case Regime::DampedOscillation: return "damped";
        case Regime::Overdamped: return "overdamped";
        case Regime::Boundary: return "boundary";
    }
    return "?";
}

SystemParams SystemParams::make(double omega0, double omegaD, double rabi, double gamma) {
    if (!(omega0 > 0.0))
        throw std::invalid_argument("SystemParams: omega0 must be > 0");
    if (!(rabi > 0.0))
        throw std::invalid_argument("SystemParams: rabi must be > 0");
    if (!(gamma >= 0.0))
        throw std::invalid_argument("SystemParams: gamma must be >= 0");
    if (!std::isfinite(omega0) || !std::isfinite(omegaD) || !std::isfinite(rabi) ||
        !std::isfinite(gamma))
        throw std::invalid_argument("SystemParams: parameters must be finite");
    return SystemParams{omega0, omegaD, rabi, gamma};
}

SystemParams SystemParams::from_detuning(double omega0, double delta, double rabi, double gamma) {
    return make(omega0, omega0 + delta, rabi, gamma);
}

double SystemParams::total_rabi() const {
    const double d = detuning();
    return std::sqrt(d * d + rabi * rabi);
}

DensityMatrix DensityMatrix::ground() {
    DensityMatrix rho;
    rho.rho11 = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::excited() {
    DensityMatrix rho;
    rho.rho00 = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed() {
    DensityMatrix rho;
    rho.rho00 = 0.5;
    rho.rho11 = 0.5;
    return rho;
}

void validate_state(const DensityMatrix& rho) {
    const std::complex<double> tr = rho.trace();
    if (std::abs(tr - 1.0) > state_tol) {
        std::ostringstream os;
        os << "density matrix trace " << tr.real() << (tr.imag() < 0 ? "-" : "+")
           << std::abs(tr.imag()) << "i differs from 1 beyond tol";
        throw invalid_state_error(os.str());
    }
    if (std::abs(rho.rho10 - std::conj(rho.rho01)) > state_tol ||
        std::abs(rho.rho00.imag()) > state_tol || std::abs(rho.rho11.imag()) > state_tol)
        throw invalid_state_error("density matrix is not Hermitian within tol");
    // Eigenvalues of the Hermitian part: tr/2 +- sqrt((rho00-rho11)^2/4 + |rho01|^2).
    const double half_diff = 0.5 * (rho.rho00.real() - rho.rho11.real());
    const std::complex<double> off = 0.5 * (rho.rho01 + std::conj(rho.rho10));
    const double radius = std::sqrt(half_diff * half_diff + std::norm(off));
    const double lambda_min = 0.5 * tr.real() - radius;
    if (lambda_min < -state_tol)
        throw invalid_state_error("density matrix has a negative eigenvalue beyond tol");
}

void validate_state(const BlochVector& r) {
    if (r.frame == Frame::transformed)
        throw invalid_state_error("transformed-frame vectors are not physical states");
    if (r.norm2() > 1.0 + state_tol)
        throw invalid_state_error("Bloch vector lies outside the unit ball");
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
    validate_state(rho);
    BlochVector r;
    r.u = (rho.rho01 + rho.rho10).real();
    r.v = (std::complex<double>{0.0, 1.0} * (rho.rho01 - rho.rho10)).real();
    r.w = (rho.rho00 - rho.rho11).real();
    r.frame = rho.frame;
    return r;
}

DensityMatrix density_from_bloch(const BlochVector& r) {
    if (r.frame != Frame::lab && r.frame != Frame::dirac)
        throw invalid_state_error("density_from_bloch requires a lab or dirac frame vector");
    validate_state(r);
    DensityMatrix rho;
    rho.rho00 = 0.5 * (1.0 + r.w);
    rho.rho11 = 0.5 * (1.0 - r.w);
    rho.rho01 = std::complex<double>{0.5 * r.u, -0.5 * r.v};
    rho.rho10 = std::complex<double>{0.5 * r.u, 0.5 * r.v};
    rho.frame = r.frame;
    return rho;
}

BlochVector dirac_to_lab(const BlochVector& r, const SystemParams& params, double t) {
    if (r.frame != Frame::dirac)
        throw frame_mismatch_error("dirac_to_lab requires a dirac-frame vector, got " +
                                   to_string(r.frame));
    const double c = std::cos(params.omega0 * t);
    const double s = std::sin(params.omega0 * t);
    BlochVector out;
    out.u = c * r.u - s * r.v;
    out.v = s * r.u + c * r.v;
    out.w = r.w;
    out.frame = Frame::lab;
    return out;
}

}  // namespace qclock
