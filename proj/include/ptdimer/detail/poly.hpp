#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptdimer/detail/dd.hpp"

namespace ptdimer {

/// Raised when the simultaneous root iteration fails to settle within its
/// budget; carries the worst residuals in the message.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

/// Polynomial with compensated complex coefficients, ascending powers.
struct CPoly {
    std::vector<cdd> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    void trim();
};

CPoly poly_add(const CPoly& a, const CPoly& b);
CPoly poly_mul(const CPoly& a, const CPoly& b);
CPoly poly_derivative(const CPoly& p);
CPoly poly_scale(const CPoly& p, const cdd& s);

// Compensated Horner evaluation; value and first derivative.
std::complex<double> poly_eval(const CPoly& p, std::complex<double> z);
void poly_eval2(const CPoly& p, std::complex<double> z, std::complex<double>& value,
                std::complex<double>& deriv);

// Coefficients rounded to plain complex doubles.
std::vector<std::complex<double>> poly_coeffs(const CPoly& p);

/// det(A - x I) of an n x n row-major complex matrix, expanded by recursive
/// cofactors over degree-1 polynomial entries; the monomial coefficients come
/// out in compensated arithmetic. Leading coefficient is exactly 1.
CPoly char_poly(std::span<const std::complex<double>> a, int n);

/// All complex roots by Aberth-Ehrlich simultaneous iteration from a
/// perturbed circle of initial guesses, followed by Newton polishing. Root
/// clusters are fused when they pass an explicit multiplicity test (all
/// lower derivatives vanish at coefficient-noise level at the refined
/// centroid); genuinely split roots always fail it and stay individual.
/// Output is unsorted. Throws ConvergenceError when residuals stay large.
///
/// Resolution limit: a cluster of total multiplicity m is located to about
/// (1e-26)^(1/m) in relative terms; roots split more finely than that are
/// indistinguishable from the monomial coefficients at this precision.
std::vector<std::complex<double>> poly_roots(const CPoly& p, int max_iter = 400);

} // namespace detail
} // namespace ptdimer
