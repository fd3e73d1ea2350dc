#include "ptdimer/detail/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ptdimer::detail {

namespace {

using std::complex;
using cplx = complex<double>;

bool is_zero_poly(const CPoly& p) {
    return std::all_of(p.c.begin(), p.c.end(), cdd_is_zero);
}

// Determinant of the active (row..n-1) x cols submatrix of entry polynomials,
// expanded along its first row. Zero entries are skipped.
CPoly det_rec(const std::vector<CPoly>& m, int n, int row, std::vector<int>& cols) {
    if (cols.empty()) return CPoly{{cdd_from(1.0)}};
    CPoly result{{cdd_from(0.0)}};
    int sign = +1;
    for (size_t k = 0; k < cols.size(); ++k) {
        const int col = cols[k];
        const CPoly& e = m[static_cast<size_t>(row) * static_cast<size_t>(n) +
                           static_cast<size_t>(col)];
        if (!is_zero_poly(e)) {
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
            CPoly minor = det_rec(m, n, row + 1, cols);
            cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), col);
            CPoly term = poly_mul(e, minor);
            if (sign < 0) term = poly_scale(term, cdd_from(-1.0));
            result = poly_add(result, term);
        }
        sign = -sign;
    }
    return result;
}

cplx newton_polish(const CPoly& p, cplx z, int steps) {
    cplx best_z = z;
    double best_abs = std::abs(poly_eval(p, z));
    for (int s = 0; s < steps; ++s) {
        cplx pv, dv;
        poly_eval2(p, z, pv, dv);
        if (pv == 0.0) return z;
        if (dv == 0.0) break;
        const cplx step = pv / dv;
        z -= step;
        const double a = std::abs(poly_eval(p, z));
        if (a < best_abs) {
            best_abs = a;
            best_z = z;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    return best_z;
}

double coeff_scale_at(const CPoly& p, double absz) {
    double s = 0.0, zp = 1.0;
    const double zb = std::max(1.0, absz);
    for (const cdd& c : p.c) {
        s += std::abs(cdd_to_cplx(c)) * zp;
        zp *= zb;
    }
    return s;
}

// Everything below the coefficient rounding floor (with a wide margin)
// counts as zero when judging root multiplicities.
double noise_floor(const CPoly& p, double absz) { return 1e-27 * coeff_scale_at(p, absz); }

std::vector<std::vector<int>> single_linkage(const std::vector<cplx>& z,
                                             const std::vector<int>& members, double radius) {
    std::vector<int> comp(members.size());
    for (size_t i = 0; i < members.size(); ++i) comp[i] = static_cast<int>(i);
    for (size_t i = 0; i < members.size(); ++i)
        for (size_t j = i + 1; j < members.size(); ++j)
            if (std::abs(z[static_cast<size_t>(members[i])] -
                         z[static_cast<size_t>(members[j])]) <= radius) {
                const int ci = comp[i], cj = comp[j];
                for (int& c : comp)
                    if (c == cj) c = ci;
            }
    std::vector<std::vector<int>> out;
    for (size_t i = 0; i < members.size(); ++i) {
        if (comp[i] != static_cast<int>(i)) continue;
        std::vector<int> group;
        for (size_t j = 0; j < members.size(); ++j)
            if (comp[j] == static_cast<int>(i)) group.push_back(members[j]);
        out.push_back(std::move(group));
    }
    return out;
}

// Multiplicity-m hypothesis for a candidate cluster: refine the centroid as
// a simple root of the (m-1)-th derivative and accept only if every lower
// derivative vanishes there at noise level. Genuinely split roots fail the
// test by many orders of magnitude and stay individual.
bool try_fuse(const std::vector<CPoly>& derivs, std::vector<cplx>& z,
              const std::vector<int>& members) {
    const size_t m = members.size();
    cplx centroid = 0.0;
    for (int k : members) centroid += z[static_cast<size_t>(k)];
    centroid /= static_cast<double>(m);
    const cplx refined = newton_polish(derivs[m - 1], centroid, 48);
    for (size_t k = 0; k + 1 < m; ++k)
        if (std::abs(poly_eval(derivs[k], refined)) >
            noise_floor(derivs[k], std::abs(refined)))
            return false;
    for (int k : members) z[static_cast<size_t>(k)] = refined;
    return true;
}

void fuse_clusters(const std::vector<CPoly>& derivs, std::vector<cplx>& z,
                   const std::vector<int>& members, double radius) {
    if (members.size() < 2) return;
    if (try_fuse(derivs, z, members)) return;
    double r = radius / 4.0;
    std::vector<std::vector<int>> comps = single_linkage(z, members, r);
    while (comps.size() <= 1 && r > 1e-18) {
        r /= 4.0;
        comps = single_linkage(z, members, r);
    }
    if (comps.size() <= 1) return; // unsplittable and not a multiple root: keep as-is
    for (const std::vector<int>& c : comps) fuse_clusters(derivs, z, c, r);
}

} // namespace

void CPoly::trim() {
    while (c.size() > 1 && cdd_is_zero(c.back())) c.pop_back();
}

CPoly poly_add(const CPoly& a, const CPoly& b) {
    CPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), cdd{});
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = cdd_add(r.c[i], b.c[i]);
    return r;
}

CPoly poly_mul(const CPoly& a, const CPoly& b) {
    CPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, cdd{});
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (cdd_is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = cdd_add(r.c[i + j], cdd_mul(a.c[i], b.c[j]));
    }
    return r;
}

CPoly poly_derivative(const CPoly& p) {
    CPoly r;
    if (p.c.size() <= 1) {
        r.c = {cdd_from(0.0)};
        return r;
    }
    r.c.resize(p.c.size() - 1);
    for (size_t k = 1; k < p.c.size(); ++k)
        r.c[k - 1] = cdd_mul(p.c[k], cdd_from(static_cast<double>(k)));
    return r;
}

CPoly poly_scale(const CPoly& p, const cdd& s) {
    CPoly r = p;
    for (cdd& c : r.c) c = cdd_mul(c, s);
    return r;
}

cplx poly_eval(const CPoly& p, cplx z) {
    const cdd zz = cdd_from(z);
    cdd v = p.c.back();
    for (size_t k = p.c.size() - 1; k-- > 0;) v = cdd_add(cdd_mul(v, zz), p.c[k]);
    return cdd_to_cplx(v);
}

void poly_eval2(const CPoly& p, cplx z, cplx& value, cplx& deriv) {
    const cdd zz = cdd_from(z);
    cdd v = p.c.back();
    cdd d = cdd_from(0.0);
    for (size_t k = p.c.size() - 1; k-- > 0;) {
        d = cdd_add(cdd_mul(d, zz), v);
        v = cdd_add(cdd_mul(v, zz), p.c[k]);
    }
    value = cdd_to_cplx(v);
    deriv = cdd_to_cplx(d);
}

std::vector<cplx> poly_coeffs(const CPoly& p) {
    std::vector<cplx> out;
    out.reserve(p.c.size());
    for (const cdd& c : p.c) out.push_back(cdd_to_cplx(c));
    return out;
}

CPoly char_poly(std::span<const cplx> a, int n) {
    if (static_cast<int>(a.size()) != n * n)
        throw std::invalid_argument("char_poly: matrix size mismatch");
    std::vector<CPoly> m(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CPoly& e = m[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
            e.c = {cdd_from(a[static_cast<size_t>(i) * static_cast<size_t>(n) +
                              static_cast<size_t>(j)])};
            if (i == j) e.c.push_back(cdd_from(-1.0));
        }
    }
    std::vector<int> cols(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) cols[static_cast<size_t>(j)] = j;
    CPoly det = det_rec(m, n, 0, cols);
    det.trim();
    return det;
}

std::vector<cplx> poly_roots(const CPoly& p_in, int max_iter) {
    CPoly p = p_in;
    p.trim();
    const int n = p.degree();
    if (n <= 0) return {};

    CPoly monic = p;
    const cdd lead = p.c.back();
    if (cdd_to_cplx(lead) != cplx(1.0, 0.0)) {
        for (cdd& c : monic.c) c = cdd_div(c, lead);
        monic.c.back() = cdd_from(1.0);
    }
    if (n == 1) return {-cdd_to_cplx(monic.c[0])};

    double cmax = 0.0;
    for (int k = 0; k < n; ++k)
        cmax = std::max(cmax, std::abs(cdd_to_cplx(monic.c[static_cast<size_t>(k)])));
    const double radius = 1.0 + cmax;

    std::vector<cplx> z(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / n + 0.4;
        z[static_cast<size_t>(k)] = radius * cplx(std::cos(phi), std::sin(phi));
    }

    double best_maxw = std::numeric_limits<double>::infinity();
    int since_improve = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
        double maxw = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx& zk = z[static_cast<size_t>(k)];
            cplx pv, dv;
            poly_eval2(monic, zk, pv, dv);
            if (pv == 0.0) continue;
            if (dv == 0.0) {
                zk += 1e-3 * (1.0 + std::abs(zk)) * cplx(0.6, 0.8);
                maxw = 1.0;
                continue;
            }
            const cplx newton = pv / dv;
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                const cplx diff = zk - z[static_cast<size_t>(j)];
                if (diff != 0.0) s += 1.0 / diff;
            }
            const cplx denom = 1.0 - newton * s;
            const cplx w = (denom != 0.0) ? newton / denom : newton;
            zk -= w;
            maxw = std::max(maxw, std::abs(w) / (1.0 + std::abs(zk)));
        }
        if (maxw < 1e-13) break;
        if (maxw < 0.7 * best_maxw) {
            best_maxw = maxw;
            since_improve = 0;
        } else if (++since_improve >= 24 && best_maxw < 1e-4) {
            // Multiple roots stall the simultaneous sweep at the cluster
            // splitting scale; polishing and cluster fusion take over.
            break;
        }
    }

    for (cplx& root : z) root = newton_polish(monic, root, 48);

    // A root of multiplicity m splits at working precision into a cluster of
    // m points; fuse each cluster that passes the multiplicity test back
    // into one refined value per member.
    std::vector<CPoly> derivs(static_cast<size_t>(n));
    derivs[0] = monic;
    for (int k = 1; k < n; ++k)
        derivs[static_cast<size_t>(k)] = poly_derivative(derivs[static_cast<size_t>(k - 1)]);
    double zmax = 0.0;
    for (const cplx& root : z) zmax = std::max(zmax, std::abs(root));
    const double cluster_radius = 1e-4 * (1.0 + zmax);
    std::vector<int> all(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) all[static_cast<size_t>(k)] = k;
    for (const std::vector<int>& comp : single_linkage(z, all, cluster_radius))
        fuse_clusters(derivs, z, comp, cluster_radius);

    std::ostringstream bad;
    bool failed = false;
    for (const cplx& root : z) {
        const double res = std::abs(poly_eval(monic, root));
        if (res > 1e-10 * coeff_scale_at(monic, std::abs(root))) {
            failed = true;
            bad << " |p(" << root.real() << (root.imag() < 0 ? "" : "+") << root.imag()
                << "i)|=" << res;
        }
    }
    if (failed)
        throw ConvergenceError("poly_roots: iteration did not converge; residuals:" + bad.str());
    return z;
}

} // namespace ptdimer::detail
