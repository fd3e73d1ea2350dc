#pragma once

#include <cmath>
#include <complex>

// Double-double (compensated) arithmetic. Characteristic-polynomial
// coefficients of a matrix with a triple eigenvalue must be carried beyond
// plain double precision, or the root cluster smears past the tolerances the
// cross-validation tests demand. Based on the usual TwoSum/TwoProd error-free
// transformations (Dekker/Knuth), with TwoProd via fma.

namespace ptdimer::detail {

struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b| or a == 0
inline dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_from(double x) { return {x, 0.0}; }
inline double dd_to_double(const dd& a) { return a.hi + a.lo; }
inline dd dd_neg(const dd& a) { return {-a.hi, -a.lo}; }

inline dd dd_add(const dd& a, const dd& b) {
    dd s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline dd dd_sub(const dd& a, const dd& b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(const dd& a, const dd& b) {
    dd p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline dd dd_div(const dd& a, const dd& b) {
    const double q0 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(dd_from(q0), b));
    const double q1 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(dd_from(q1), b));
    const double q2 = r.hi / b.hi;
    dd q = quick_two_sum(q0, q1);
    return dd_add(q, dd_from(q2));
}

struct cdd {
    dd re, im;
};

inline cdd cdd_from(const std::complex<double>& z) { return {dd_from(z.real()), dd_from(z.imag())}; }
inline std::complex<double> cdd_to_cplx(const cdd& z) { return {dd_to_double(z.re), dd_to_double(z.im)}; }
inline cdd cdd_neg(const cdd& z) { return {dd_neg(z.re), dd_neg(z.im)}; }

inline cdd cdd_add(const cdd& a, const cdd& b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }
inline cdd cdd_sub(const cdd& a, const cdd& b) { return {dd_sub(a.re, b.re), dd_sub(a.im, b.im)}; }

inline cdd cdd_mul(const cdd& a, const cdd& b) {
    return {dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
            dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}

inline cdd cdd_div(const cdd& a, const cdd& b) {
    const dd n = dd_add(dd_mul(b.re, b.re), dd_mul(b.im, b.im));
    const cdd num = cdd_mul(a, cdd{b.re, dd_neg(b.im)});
    return {dd_div(num.re, n), dd_div(num.im, n)};
}

inline bool cdd_is_zero(const cdd& z) {
    return z.re.hi == 0.0 && z.re.lo == 0.0 && z.im.hi == 0.0 && z.im.lo == 0.0;
}

} // namespace ptdimer::detail
