#include "ptdimer/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptdimer/symmetry.hpp"

namespace ptdimer {

namespace {

constexpr double kRepeatedRootDiscTol = 1e-13;

std::array<cplx, 3> depressed_roots(double p, double q, double disc) {
    std::array<cplx, 3> y;
    // Repeated-root formulas apply inside the discriminant band only in the
    // genuine double-root balance 4|p|^3 ~ 27q^2 >> band. Near a triple root
    // (p and q both tiny) the band is entered with three well-separated
    // roots, which the sign branches below handle correctly.
    if (std::abs(disc) <= kRepeatedRootDiscTol && p < 0.0 &&
        -4.0 * p * p * p > 2.0 * kRepeatedRootDiscTol) {
        const double yd = -3.0 * q / (2.0 * p); // double root; p = -3a^2, q = 2a^3
        y = {cplx(3.0 * q / p), cplx(yd), cplx(yd)};
        return y;
    }
    if (disc >= 0.0 && p < 0.0) {
        // three real roots
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            y[static_cast<size_t>(k)] =
                m * std::cos(phi - 2.0 * std::numbers::pi * static_cast<double>(k) / 3.0);
        return y;
    }
    if (p == 0.0 && q == 0.0) {
        y.fill(0.0); // triple root
        return y;
    }
    // one real root and a conjugate pair; pick the non-cancelling cube root
    // first, recover the other from u*v = -p/3
    const double s = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
    const double u = std::cbrt(-q / 2.0 - std::copysign(s, q));
    const double v = (u == 0.0) ? 0.0 : -p / (3.0 * u);
    y[0] = u + v;
    y[1] = cplx(-(u + v) / 2.0, std::sqrt(3.0) / 2.0 * (u - v));
    y[2] = std::conj(y[1]);
    return y;
}

} // namespace

std::pair<cplx, cplx> tls_eigenvalues(double epsilon, double t, double gamma, double lambda) {
    if (gamma != 0.0 && lambda != 0.0)
        throw std::invalid_argument(
            "tls_eigenvalues: gamma and lambda must not both be nonzero");
    const cplx s = std::sqrt(cplx(t * t - gamma * gamma - lambda * lambda, 0.0));
    return {epsilon + s, epsilon - s};
}

CubicCoefficients reduced_cubic(const DimerParams& params) {
    const double k =
        4.0 * (params.t() * params.t() - params.gamma() * params.gamma() -
               params.lambda() * params.lambda());
    const double l = 4.0 * params.gamma() * params.gamma() * params.u();
    return {1.0, -params.u(), -k, -l, k, l, 2.0 * params.epsilon(), params};
}

std::array<cplx, 3> cubic_roots(const CubicCoefficients& c) {
    // depress x^3 + Bx^2 + Cx + D with x = y - B/3
    const double B = c.b, C = c.c, D = c.d;
    const double p = C - B * B / 3.0;
    const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    std::array<cplx, 3> roots = depressed_roots(p, q, disc);
    for (cplx& r : roots) r -= B / 3.0;
    return roots;
}

void sort_spectrum(std::span<cplx> values) {
    std::sort(values.begin(), values.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    size_t i = 0;
    while (i < values.size()) {
        size_t j = i + 1;
        while (j < values.size() &&
               std::abs(values[j].real() - values[j - 1].real()) <=
                   1e-9 * (1.0 + std::abs(values[j].real())))
            ++j;
        std::sort(values.begin() + static_cast<std::ptrdiff_t>(i),
                  values.begin() + static_cast<std::ptrdiff_t>(j),
                  [](const cplx& a, const cplx& b) {
                      if (a.imag() != b.imag()) return a.imag() < b.imag();
                      return a.real() < b.real();
                  });
        i = j;
    }
}

Spectrum closed_form_spectrum(const DimerParams& params) {
    if (params.gamma() != 0.0)
        throw std::invalid_argument(
            "closed_form_spectrum: requires gamma = 0 (use cardano_spectrum)");
    const double e2 = 2.0 * params.epsilon();
    const double u = params.u();
    const cplx root = std::sqrt(
        cplx(16.0 * (params.t() * params.t() - params.lambda() * params.lambda()) + u * u, 0.0));
    Spectrum sp{{cplx(e2), cplx(e2), cplx(e2), cplx(e2 + u),
                 0.5 * (cplx(4.0 * params.epsilon() + u) + root),
                 0.5 * (cplx(4.0 * params.epsilon() + u) - root)},
                Method::closed_form,
                params};
    sort_spectrum(sp.values);
    return sp;
}

Spectrum cardano_spectrum(const DimerParams& params) {
    const CubicCoefficients c = reduced_cubic(params);
    const std::array<cplx, 3> xs = cubic_roots(c);
    const double e2 = c.s;
    Spectrum sp{{cplx(e2), cplx(e2), cplx(e2), e2 + params.u() - xs[0], e2 + params.u() - xs[1],
                 e2 + params.u() - xs[2]},
                Method::cardano,
                params};
    sort_spectrum(sp.values);
    return sp;
}

Spectrum oracle_spectrum(const HamiltonianMatrix& h) {
    const detail::CPoly cp = detail::char_poly(std::span<const cplx>(h.raw()), 6);
    const std::vector<cplx> roots = detail::poly_roots(cp);
    Spectrum sp{{}, Method::oracle, h.params()};
    for (size_t i = 0; i < 6; ++i) sp.values[i] = roots.at(i);
    sort_spectrum(sp.values);
    return sp;
}

StateVector sz0_eigenvector(const DimerParams& params, cplx value) {
    const SzBlocks blocks = split_sz(build_hamiltonian(params));
    std::array<cplx, 16> a = blocks.zero;
    for (int i = 0; i < 4; ++i) a[static_cast<size_t>(i) * 4 + static_cast<size_t>(i)] -= value;

    std::array<cplx, 16> u = a;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(u[static_cast<size_t>(r) * 4 + static_cast<size_t>(col)]) >
                std::abs(u[static_cast<size_t>(piv) * 4 + static_cast<size_t>(col)]))
                piv = r;
        if (piv != col)
            for (int cc = 0; cc < 4; ++cc)
                std::swap(u[static_cast<size_t>(col) * 4 + static_cast<size_t>(cc)],
                          u[static_cast<size_t>(piv) * 4 + static_cast<size_t>(cc)]);
        const cplx pv = u[static_cast<size_t>(col) * 4 + static_cast<size_t>(col)];
        if (pv == 0.0) continue;
        for (int r = col + 1; r < 4; ++r) {
            const cplx f = u[static_cast<size_t>(r) * 4 + static_cast<size_t>(col)] / pv;
            if (f == 0.0) continue;
            u[static_cast<size_t>(r) * 4 + static_cast<size_t>(col)] = 0.0;
            for (int cc = col + 1; cc < 4; ++cc)
                u[static_cast<size_t>(r) * 4 + static_cast<size_t>(cc)] -=
                    f * u[static_cast<size_t>(col) * 4 + static_cast<size_t>(cc)];
        }
    }

    // free variable at the smallest pivot; rows below it carry only zeros
    int k = 0;
    double kmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const double m = std::abs(u[static_cast<size_t>(i) * 4 + static_cast<size_t>(i)]);
        if (m < kmin) {
            kmin = m;
            k = i;
        }
    }
    std::array<cplx, 4> w{};
    w[static_cast<size_t>(k)] = 1.0;
    for (int i = k - 1; i >= 0; --i) {
        cplx s = 0;
        for (int j = i + 1; j < 4; ++j)
            s += u[static_cast<size_t>(i) * 4 + static_cast<size_t>(j)] * w[static_cast<size_t>(j)];
        const cplx pv = u[static_cast<size_t>(i) * 4 + static_cast<size_t>(i)];
        w[static_cast<size_t>(i)] = (pv == 0.0) ? cplx(0.0) : -s / pv;
    }

    double n2 = 0;
    for (const cplx& x : w) n2 += std::norm(x);
    const double nrm = std::sqrt(n2);
    for (cplx& x : w) x /= nrm;

    double res2 = 0;
    for (int i = 0; i < 4; ++i) {
        cplx r = 0;
        for (int j = 0; j < 4; ++j)
            r += a[static_cast<size_t>(i) * 4 + static_cast<size_t>(j)] * w[static_cast<size_t>(j)];
        res2 += std::norm(r);
    }
    if (std::sqrt(res2) > 1e-8)
        throw std::invalid_argument("sz0_eigenvector: value is not an eigenvalue of the Sz=0 block"
                                    " (residual " +
                                    std::to_string(std::sqrt(res2)) + ")");

    StateVector v;
    for (int i = 0; i < 4; ++i) v.amp(i + 2) = w[static_cast<size_t>(i)];
    return v;
}

} // namespace ptdimer
