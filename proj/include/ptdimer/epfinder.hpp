#pragma once

#include <utility>
#include <vector>

#include "ptdimer/spectra.hpp"

namespace ptdimer {

/// A located exceptional point: a simple zero of the reduced cubic's
/// discriminant along one parameter axis. Self-generated points survive the
/// continuation U -> 0 with everything else held fixed; interaction-generated
/// ones exist only at finite U and die along the way.
struct EpRecord {
    enum class Axis { lambda, gamma };
    enum class Kind { self_generated, interaction_generated };

    Axis axis;
    double value;
    double bracket_lo, bracket_hi; // final bisection interval; sign change across it
    Kind kind;
    DimerParams fixed;
};

/// The discriminant touched zero without changing sign: a degeneracy that is
/// not an onset of complex eigenvalues. Reported separately, never as an EP.
struct TangencyEvent {
    EpRecord::Axis axis;
    double value;
    double min_disc;
};

struct ScanResult {
    std::vector<EpRecord> eps; // ascending by value
    std::vector<TangencyEvent> tangencies;
};

/// Discriminant of the monic cubic a x^3 + b x^2 + c x + d:
/// 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2. Positive means three distinct
/// real roots (PT unbroken), negative means a conjugate pair (PT broken);
/// its zeros along a parameter axis are the exceptional points.
double cubic_discriminant(const CubicCoefficients& c);

/// Discriminant of the reduced cubic with the scanned axis set to x.
double discriminant_at(const DimerParams& fixed, EpRecord::Axis axis, double x);

/// Locates every EP in `range`: evaluates the discriminant on a grid of
/// coarse_steps cells, brackets each sign change and bisects it to width
/// <= tol. A zero exactly at a scan endpoint widens the scan outward (with a
/// warning on stderr). Two EPs inside one coarse cell would be missed; the
/// default density of 2000 cells makes that a non-issue for the smooth
/// discriminants of this model.
ScanResult scan_eps(const DimerParams& fixed, EpRecord::Axis axis,
                    std::pair<double, double> range, int coarse_steps = 2000,
                    double tol = 1e-9);

/// One constant-U slice family of the PT phase boundary in a parameter plane.
struct BoundaryCurve {
    enum class Plane { lambda_u, gamma_u };

    Plane plane;
    std::vector<std::pair<double, double>> points; // (U, critical axis value), ascending U
    int branch;                                    // birth order, 0 first
};

/// Traces the PT phase boundary: scans the plane's first axis at each of
/// u_steps values of U and stitches the located EPs into branches by
/// nearest-value continuation (jump threshold 10x the median spacing along
/// the branch). Branch births and deaths, e.g. the interaction-generated
/// pair appearing at finite U, start or end curves rather than failing.
/// Each emitted point is polished until |discriminant| < 1e-9.
std::vector<BoundaryCurve> trace_boundary(const DimerParams& fixed, BoundaryCurve::Plane plane,
                                          std::pair<double, double> u_range, int u_steps,
                                          double tol = 1e-9,
                                          std::pair<double, double> axis_range = {0.0, 3.0});

} // namespace ptdimer
