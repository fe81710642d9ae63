// Core domain types for the driven two-level system: physical parameters,
// Bloch vectors with explicit frame tags, 2x2 density matrices, and the
// conversions between them.  All angular frequencies share one arbitrary
// unit (hbar = 1); the detuning is always omegaD - omega0.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qclock {

// Absolute tolerance for state checks (trace, Hermiticity, positivity,
// Bloch-ball containment).
inline constexpr double state_tol = 1e-10;

struct invalid_state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct frame_mismatch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct degenerate_branch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct physicality_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coordinate frame of a Bloch vector or density matrix.
//   lab:         Schroedinger picture, carries the fast omega0 rotation
//   dirac:       interaction picture rotating at omega0
//   transformed: decay-rescaled variables carrying an exp(gamma*t) factor;
//                not confined to the unit ball
enum class Frame { lab, dirac, transformed };

enum class Regime { RabiOscillation, DampedOscillation, Overdamped, Boundary };

std::string to_string(Frame f);
std::string to_string(Regime r);

// Physical parameters of the driven TLS.  rabi > 0, gamma >= 0, omega0 > 0.
struct SystemParams {
    double omega0;  // transition angular frequency
    double omegaD;  // driving angular frequency
    double rabi;    // Rabi frequency (coupling strength)
    double gamma;   // spontaneous emission rate

    // Validating factory; throws std::invalid_argument on bad input.
    static SystemParams make(double omega0, double omegaD, double rabi, double gamma);
    // Convenience: specify the detuning instead of omegaD.
    static SystemParams from_detuning(double omega0, double delta, double rabi, double gamma);

    // Detuning, a single subtraction so recomputation is bitwise stable.
    double detuning() const { return omegaD - omega0; }
    // Total Rabi frequency sqrt(delta^2 + rabi^2).
    double total_rabi() const;
};

struct BlochVector {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    Frame frame = Frame::dirac;

    double norm2() const { return u * u + v * v + w * w; }
};

// Density matrix in the eigenbasis of S^z; index 0 is the excited state,
// index 1 the ground state, so w = rho00 - rho11 is the population
// difference and spontaneous decay drives w -> -1.
struct DensityMatrix {
    std::complex<double> rho00{0.0, 0.0};
    std::complex<double> rho01{0.0, 0.0};
    std::complex<double> rho10{0.0, 0.0};
    std::complex<double> rho11{0.0, 0.0};
    Frame frame = Frame::dirac;

    static DensityMatrix ground();
    static DensityMatrix excited();
    static DensityMatrix maximally_mixed();

    std::complex<double> trace() const { return rho00 + rho11; }
};

// Throws invalid_state_error if rho violates trace/Hermiticity/positivity
// beyond state_tol.
void validate_state(const DensityMatrix& rho);
// Throws invalid_state_error if r lies outside the closed unit ball beyond
// state_tol (lab/dirac frames only; transformed vectors are unbounded).
void validate_state(const BlochVector& r);

// (u, v, w) = (tr rho.sx, tr rho.sy, tr rho.sz); frame carried through.
BlochVector bloch_from_density(const DensityMatrix& rho);

// Inverse of bloch_from_density: rho = (1 + u.sx + v.sy + w.sz) / 2.
DensityMatrix density_from_bloch(const BlochVector& r);

// Rotate a dirac-frame vector by omega0*t about z to recover lab-frame
// expectation values; w is untouched.
BlochVector dirac_to_lab(const BlochVector& r, const SystemParams& params, double t);

}  // namespace qclock
