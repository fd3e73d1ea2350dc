#include "ptdimer/epfinder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>

namespace ptdimer {

namespace {

using Axis = EpRecord::Axis;

DimerParams with_axis(const DimerParams& p, Axis axis, double x) {
    return axis == Axis::lambda ? p.with_lambda(x) : p.with_gamma(x);
}

int sgn(double x) { return (x > 0) - (x < 0); }

// Bisect a sign change of f on [a, b] down to width tol; returns the final
// bracket. An exact zero collapses the bracket around it.
std::pair<double, double> bisect(const std::function<double(double)>& f, double a, double b,
                                 double fa, double tol) {
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        // an exact zero collapses the bracket; quarter-tol keeps the width
        // within tol after rounding
        if (fm == 0.0) return {m - 0.25 * tol, m + 0.25 * tol};
        if (sgn(fm) == sgn(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return {a, b};
}

// All discriminant zeros of p along the axis in [lo, hi], located on a fine
// grid and bisected; ascending order.
std::vector<double> zeros_in(const DimerParams& p, Axis axis, double lo, double hi) {
    const int cells = 1024;
    const double h = (hi - lo) / cells;
    std::vector<double> zeros;
    double xprev = lo;
    double fprev = discriminant_at(p, axis, lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + i * h;
        const double fx = discriminant_at(p, axis, x);
        if (fx == 0.0) {
            zeros.push_back(x);
        } else if (fprev != 0.0 && sgn(fprev) != sgn(fx)) {
            const auto br = bisect([&](double xx) { return discriminant_at(p, axis, xx); },
                                   xprev, x, fprev, 1e-5 * h);
            zeros.push_back(0.5 * (br.first + br.second));
        }
        xprev = x;
        fprev = fx;
    }
    return zeros;
}

// Order-preserving alignment of sorted old positions onto sorted new ones
// (continuation curves never cross): maximize the number of matches within
// the per-old thresholds, then minimize total displacement. Returns the
// matched new index per old position, or -1.
std::vector<int> align_sorted(const std::vector<double>& olds, const std::vector<double>& news,
                              const std::vector<double>& thr) {
    const size_t m = olds.size(), n = news.size();
    constexpr double kMatchBonus = 1e6;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(m + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<int>> step(m + 1, std::vector<int>(n + 1, 0));
    dp[0][0] = 0.0;
    for (size_t i = 0; i <= m; ++i)
        for (size_t j = 0; j <= n; ++j) {
            if (dp[i][j] == inf) continue;
            if (i < m && dp[i][j] < dp[i + 1][j]) {
                dp[i + 1][j] = dp[i][j];
                step[i + 1][j] = 1;
            }
            if (j < n && dp[i][j] < dp[i][j + 1]) {
                dp[i][j + 1] = dp[i][j];
                step[i][j + 1] = 2;
            }
            if (i < m && j < n) {
                const double d = std::abs(olds[i] - news[j]);
                if (d <= thr[i] && dp[i][j] + d - kMatchBonus < dp[i + 1][j + 1]) {
                    dp[i + 1][j + 1] = dp[i][j] + d - kMatchBonus;
                    step[i + 1][j + 1] = 3;
                }
            }
        }
    std::vector<int> match(m, -1);
    for (size_t i = m, j = n; i > 0 || j > 0;) {
        switch (step[i][j]) {
            case 1: --i; break;
            case 2: --j; break;
            default:
                match[i - 1] = static_cast<int>(j - 1);
                --i;
                --j;
                break;
        }
    }
    return match;
}

// Joint continuation of every located EP as U is stepped to zero. Branches
// that lose their discriminant zero along the way are interaction-generated;
// branches that survive to U = 0 are self-generated. Tracking the whole set
// at once keeps a dying branch from hopping onto a surviving neighbour.
std::vector<EpRecord::Kind> classify_all(const DimerParams& fixed, Axis axis,
                                         const std::vector<double>& eps, double cell) {
    std::vector<EpRecord::Kind> kinds(eps.size(), EpRecord::Kind::self_generated);
    if (fixed.u() == 0.0 || eps.empty()) return kinds;

    const int steps = 24;
    std::vector<double> pos = eps; // ascending; continuation preserves order
    std::vector<bool> alive(eps.size(), true);
    std::vector<double> motion(eps.size(), 4.0 * cell);

    for (int k = 1; k <= steps; ++k) {
        const double uk = fixed.u() * (1.0 - static_cast<double>(k) / steps);
        const DimerParams pk = fixed.with_u(uk);

        double lo = std::numeric_limits<double>::infinity(), hi = -lo, maxmot = 0;
        for (size_t i = 0; i < pos.size(); ++i) {
            if (!alive[i]) continue;
            lo = std::min(lo, pos[i]);
            hi = std::max(hi, pos[i]);
            maxmot = std::max(maxmot, motion[i]);
        }
        if (!(lo <= hi)) break; // nothing left to track
        const double margin =
            0.1 * (1.0 + std::max(std::abs(lo), std::abs(hi))) + 10.0 * maxmot;
        const std::vector<double> zeros = zeros_in(pk, axis, lo - margin, hi + margin);

        std::vector<size_t> idx;
        std::vector<double> olds, thr;
        const double cellw = (hi - lo + 2.0 * margin) / 1024.0;
        for (size_t i = 0; i < pos.size(); ++i) {
            if (!alive[i]) continue;
            idx.push_back(i);
            olds.push_back(pos[i]);
            thr.push_back(std::max({8.0 * motion[i], 0.02 * (1.0 + std::abs(pos[i])),
                                    8.0 * cellw}));
        }
        const std::vector<int> match = align_sorted(olds, zeros, thr);
        for (size_t a = 0; a < idx.size(); ++a) {
            if (match[a] < 0) {
                alive[idx[a]] = false;
                kinds[idx[a]] = EpRecord::Kind::interaction_generated;
            } else {
                const double next = zeros[static_cast<size_t>(match[a])];
                motion[idx[a]] = std::abs(next - pos[idx[a]]);
                pos[idx[a]] = next;
            }
        }
    }
    return kinds;
}

// Secant refinement of an already-bisected zero until |f| is at rounding
// level; the boundary points promise |discriminant| < 1e-9.
double polish_zero(const std::function<double(double)>& f, double a, double b) {
    double x0 = a, x1 = b;
    double f0 = f(x0), f1 = f(x1);
    double best_x = std::abs(f0) < std::abs(f1) ? x0 : x1;
    double best_f = std::min(std::abs(f0), std::abs(f1));
    for (int i = 0; i < 20 && best_f > 1e-12; ++i) {
        if (f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!std::isfinite(x2)) break;
        const double f2 = f(x2);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (std::abs(f2) < best_f) {
            best_f = std::abs(f2);
            best_x = x2;
        }
    }
    return best_x;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

double cubic_discriminant(const CubicCoefficients& cc) {
    const double a = cc.a, b = cc.b, c = cc.c, d = cc.d;
    return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c -
           27.0 * a * a * d * d;
}

double discriminant_at(const DimerParams& fixed, EpRecord::Axis axis, double x) {
    return cubic_discriminant(reduced_cubic(with_axis(fixed, axis, x)));
}

ScanResult scan_eps(const DimerParams& fixed, EpRecord::Axis axis,
                    std::pair<double, double> range, int coarse_steps, double tol) {
    if (!(range.first < range.second))
        throw std::invalid_argument("scan_eps: range must satisfy lo < hi");
    if (coarse_steps < 2) throw std::invalid_argument("scan_eps: coarse_steps must be >= 2");
    if (!(tol > 0)) throw std::invalid_argument("scan_eps: tol must be > 0");

    const auto f = [&](double x) { return discriminant_at(fixed, axis, x); };
    const double h = (range.second - range.first) / coarse_steps;

    std::vector<double> xs, ds;
    xs.reserve(static_cast<size_t>(coarse_steps) + 1);
    for (int i = 0; i <= coarse_steps; ++i) xs.push_back(range.first + i * h);
    for (double x : xs) ds.push_back(f(x));

    // A zero pinned to a scan endpoint leaves the bracket half outside the
    // requested range; widen outward so it becomes interior.
    for (int guard = 0; ds.front() == 0.0 && guard < 8; ++guard) {
        std::cerr << "scan_eps: discriminant vanishes at scan edge " << xs.front()
                  << "; widening\n";
        xs.insert(xs.begin(), xs.front() - h);
        ds.insert(ds.begin(), f(xs.front()));
    }
    for (int guard = 0; ds.back() == 0.0 && guard < 8; ++guard) {
        std::cerr << "scan_eps: discriminant vanishes at scan edge " << xs.back()
                  << "; widening\n";
        xs.push_back(xs.back() + h);
        ds.push_back(f(xs.back()));
    }

    ScanResult result;
    const size_t n = xs.size();

    // Exact zeros on the grid: EP if the flanking signs differ, tangency if
    // they agree. Runs of zeros are treated as one event.
    std::vector<bool> consumed(n, false);
    for (size_t i = 1; i + 1 < n; ++i) {
        if (ds[i] != 0.0 || consumed[i]) continue;
        size_t j = i;
        while (j + 1 < n && ds[j + 1] == 0.0) ++j;
        for (size_t kk = i; kk <= j; ++kk) consumed[kk] = true;
        if (j + 1 >= n) break; // handled by widening unless guard ran out
        const double mid = 0.5 * (xs[i] + xs[j]);
        if (sgn(ds[i - 1]) != sgn(ds[j + 1])) {
            const double lo = std::max(xs[i - 1], mid - 0.25 * tol);
            const double hi = std::min(xs[j + 1], mid + 0.25 * tol);
            result.eps.push_back({axis, mid, lo, hi, EpRecord::Kind::self_generated, fixed});
        } else {
            result.tangencies.push_back({axis, mid, 0.0});
        }
    }

    // Ordinary sign changes between nonzero neighbours.
    for (size_t i = 0; i + 1 < n; ++i) {
        if (ds[i] == 0.0 || ds[i + 1] == 0.0) continue;
        if (sgn(ds[i]) == sgn(ds[i + 1])) continue;
        const auto br = bisect(f, xs[i], xs[i + 1], ds[i], tol);
        result.eps.push_back(
            {axis, 0.5 * (br.first + br.second), br.first, br.second,
             EpRecord::Kind::self_generated, fixed});
    }

    // Sign-preserving dips: refine strict local minima of |disc| and report a
    // tangency when the minimum reaches zero at rounding level.
    for (size_t i = 1; i + 1 < n; ++i) {
        if (ds[i] == 0.0 || ds[i - 1] == 0.0 || ds[i + 1] == 0.0) continue;
        if (sgn(ds[i - 1]) != sgn(ds[i]) || sgn(ds[i]) != sgn(ds[i + 1])) continue;
        if (std::abs(ds[i]) >= std::abs(ds[i - 1]) || std::abs(ds[i]) > std::abs(ds[i + 1]))
            continue;
        double a = xs[i - 1], b = xs[i + 1];
        for (int it = 0; it < 80 && (b - a) > tol; ++it) {
            const double m1 = a + (b - a) * 0.381966;
            const double m2 = b - (b - a) * 0.381966;
            if (std::abs(f(m1)) < std::abs(f(m2)))
                b = m2;
            else
                a = m1;
        }
        const double xm = 0.5 * (a + b);
        const double dm = f(xm);
        const double local = std::max({std::abs(ds[i - 1]), std::abs(ds[i + 1]), 1.0});
        if (std::abs(dm) <= 1e-9 * local && sgn(dm) == sgn(ds[i]))
            result.tangencies.push_back({axis, xm, dm});
    }

    std::sort(result.eps.begin(), result.eps.end(),
              [](const EpRecord& a, const EpRecord& b) { return a.value < b.value; });
    std::sort(result.tangencies.begin(), result.tangencies.end(),
              [](const TangencyEvent& a, const TangencyEvent& b) { return a.value < b.value; });

    std::vector<double> values;
    for (const EpRecord& r : result.eps) values.push_back(r.value);
    const std::vector<EpRecord::Kind> kinds = classify_all(fixed, axis, values, h);
    for (size_t i = 0; i < result.eps.size(); ++i) result.eps[i].kind = kinds[i];
    return result;
}

std::vector<BoundaryCurve> trace_boundary(const DimerParams& fixed, BoundaryCurve::Plane plane,
                                          std::pair<double, double> u_range, int u_steps,
                                          double tol, std::pair<double, double> axis_range) {
    if (u_steps < 2) throw std::invalid_argument("trace_boundary: u_steps must be >= 2");
    const Axis axis =
        plane == BoundaryCurve::Plane::lambda_u ? Axis::lambda : Axis::gamma;

    std::vector<BoundaryCurve> curves;
    std::vector<int> active; // indices into curves still open

    for (int j = 0; j < u_steps; ++j) {
        const double u =
            u_range.first + (u_range.second - u_range.first) * j / (u_steps - 1);
        const DimerParams pu = fixed.with_u(u);
        const ScanResult scan = scan_eps(pu, axis, axis_range, 2000, tol);

        std::vector<double> vals;
        for (const EpRecord& r : scan.eps)
            vals.push_back(polish_zero([&](double x) { return discriminant_at(pu, axis, x); },
                                       r.bracket_lo, r.bracket_hi));

        // Branches at one U are distinct values and continuous in U, so they
        // never cross; continuation is an order-preserving alignment of the
        // sorted open-branch endpoints against the sorted new points.
        std::sort(active.begin(), active.end(), [&](int a, int b) {
            return curves[static_cast<size_t>(a)].points.back().second <
                   curves[static_cast<size_t>(b)].points.back().second;
        });
        std::vector<double> olds, thr;
        for (int a : active) {
            const BoundaryCurve& c = curves[static_cast<size_t>(a)];
            std::vector<double> spacings;
            for (size_t k = 1; k < c.points.size(); ++k)
                spacings.push_back(std::abs(c.points[k].second - c.points[k - 1].second));
            olds.push_back(c.points.back().second);
            thr.push_back(spacings.empty()
                              ? 0.15 * (axis_range.second - axis_range.first)
                              : std::max(10.0 * median(spacings),
                                         0.01 * (1.0 + std::abs(c.points.back().second))));
        }
        const std::vector<int> match = align_sorted(olds, vals, thr);

        std::vector<bool> val_used(vals.size(), false);
        std::vector<int> next_active;
        for (size_t a = 0; a < active.size(); ++a) {
            if (match[a] < 0) continue; // branch death
            curves[static_cast<size_t>(active[a])].points.emplace_back(
                u, vals[static_cast<size_t>(match[a])]);
            val_used[static_cast<size_t>(match[a])] = true;
            next_active.push_back(active[a]);
        }
        for (size_t v = 0; v < vals.size(); ++v) {
            if (val_used[v]) continue; // branch birth
            curves.push_back(
                BoundaryCurve{plane, {{u, vals[v]}}, static_cast<int>(curves.size())});
            next_active.push_back(static_cast<int>(curves.size()) - 1);
        }
        std::sort(next_active.begin(), next_active.end());
        active = std::move(next_active);
    }
    return curves;
}

} // namespace ptdimer
