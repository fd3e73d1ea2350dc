#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>

#include "ptdimer/detail/poly.hpp"
#include "ptdimer/fock.hpp"

namespace ptdimer {

/// Eigenvalues of the two-level reference matrices with balanced gain/loss
/// (gamma) or asymmetric hopping (lambda): epsilon +- sqrt(t^2 - gamma^2) or
/// epsilon +- sqrt(t^2 - lambda^2), principal square root. Used as
/// consistency anchors for the dimer spectra; the two non-Hermiticities are
/// not combined here, so gamma and lambda must not both be nonzero.
std::pair<cplx, cplx> tls_eigenvalues(double epsilon, double t, double gamma, double lambda);

/// Reduced characteristic cubic of the Sz=0 sector,
///     X^3 - U X^2 - K X - L = 0,
/// with K = 4(t^2 - gamma^2 - lambda^2), L = 4 gamma^2 U. Roots map back to
/// energies as E = 2 epsilon + U - X.
struct CubicCoefficients {
    double a, b, c, d; // monic coefficients 1, -U, -K, -L
    double k, l;       // K and L above
    double s;          // 2 epsilon
    DimerParams params;
};

CubicCoefficients reduced_cubic(const DimerParams& params);

/// Roots of the reduced cubic via the discriminant-split closed form: three
/// trigonometric real roots when the discriminant is positive, one real root
/// plus a conjugate pair via Cardano radicals when negative, repeated-root
/// formulas inside |discriminant| < 1e-13. The split keeps the branches
/// clean near coalescence, where a one-size-fits-all formula loses digits.
std::array<cplx, 3> cubic_roots(const CubicCoefficients& c);

enum class Method { closed_form, cardano, oracle };

struct Spectrum {
    std::array<cplx, 6> values; // sorted by (re, im); see sort_spectrum
    Method method;
    std::optional<DimerParams> params;

    cplx sum() const {
        cplx s = 0;
        for (const cplx& v : values) s += v;
        return s;
    }
};

/// Spectrum for gamma = 0 from the factorized characteristic equation:
/// {2e (x3), 2e+U, (4e + U +- sqrt(16(t^2-lambda^2) + U^2))/2}. For U = 0
/// this degenerates to {2e (x4), 2(e +- sqrt(t^2-lambda^2))}. Rejects
/// gamma != 0 (use cardano_spectrum there).
Spectrum closed_form_spectrum(const DimerParams& params);

/// Spectrum {2e (x3)} plus the three energies 2e + U - X_k from the reduced
/// cubic; valid for all parameters and equal to closed_form_spectrum at
/// gamma = 0.
Spectrum cardano_spectrum(const DimerParams& params);

/// Independent verification route: expands the full degree-6 characteristic
/// polynomial by cofactors and finds all roots by simultaneous iteration
/// (see detail::poly_roots). Deliberately shares no code with the closed
/// forms so that agreement is evidence rather than tautology. Throws
/// ConvergenceError if the iteration fails.
Spectrum oracle_spectrum(const HamiltonianMatrix& h);

/// Unit-norm eigenvector of the Sz=0 block for the given eigenvalue, by
/// Gaussian elimination with partial pivoting on the 4x4 shifted block.
/// Amplitudes land on basis labels 2..5. Inputs whose residual
/// ||(B - v)w|| exceeds 1e-8 are rejected as non-eigenvalues.
StateVector sz0_eigenvector(const DimerParams& params, cplx value);

/// Sort by (re, im) lexicographically, then reorder runs of nearly equal
/// real parts by (im, re) so that conjugate pairs computed by different
/// methods land in the same slots.
void sort_spectrum(std::span<cplx> values);

} // namespace ptdimer
