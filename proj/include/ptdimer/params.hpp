#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ptdimer {

using cplx = std::complex<double>;

/// Model parameters of the non-Hermitian two-site dimer. All energies are
/// dimensionless (conventionally in units of the hopping t). Immutable;
/// construction rejects non-finite values.
///
///   epsilon : orbital energy of each site
///   t       : symmetric hopping amplitude
///   lambda  : asymmetric (dissipative-current) hopping strength
///   gamma   : balanced gain/loss added to the orbital energies
///   u       : on-site Coulomb energy penalizing double occupancy
class DimerParams {
public:
    DimerParams(double epsilon, double t, double lambda, double gamma, double u)
        : epsilon_(epsilon), t_(t), lambda_(lambda), gamma_(gamma), u_(u) {
        for (double v : {epsilon, t, lambda, gamma, u}) {
            if (!std::isfinite(v))
                throw std::invalid_argument("DimerParams: all parameters must be finite");
        }
    }

    double epsilon() const noexcept { return epsilon_; }
    double t() const noexcept { return t_; }
    double lambda() const noexcept { return lambda_; }
    double gamma() const noexcept { return gamma_; }
    double u() const noexcept { return u_; }

    // Asymmetric hopping amplitudes t +- lambda.
    double t_plus() const noexcept { return t_ + lambda_; }
    double t_minus() const noexcept { return t_ - lambda_; }

    // Gain/loss orbital energies epsilon +- i*gamma (site 1 gains, site 2 loses).
    cplx eps_plus() const noexcept { return {epsilon_, gamma_}; }
    cplx eps_minus() const noexcept { return {epsilon_, -gamma_}; }

    DimerParams with_lambda(double lambda) const { return {epsilon_, t_, lambda, gamma_, u_}; }
    DimerParams with_gamma(double gamma) const { return {epsilon_, t_, lambda_, gamma, u_}; }
    DimerParams with_u(double u) const { return {epsilon_, t_, lambda_, gamma_, u}; }

private:
    double epsilon_, t_, lambda_, gamma_, u_;
};

} // namespace ptdimer
