#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hvvi/check_report.hpp"
#include "hvvi/geometry.hpp"

namespace hvvi::nonsmooth {

using geom::Point;
using geom::Tangent;

/// Finite generator list; the convexificator set is the convex hull of the
/// generators (closed and bounded by construction). All generators share the
/// base point.
struct Convexificator {
    Point base;
    std::vector<Tangent> generators;
};

Convexificator make_convexificator(Point base, std::vector<std::vector<double>> generator_coords);

/// A scalar objective: a value evaluator plus a convexificator oracle that
/// returns a valid two-sided convexificator at any queried point.
struct ScalarFunction {
    std::function<double(const Point&)> evaluator;
    std::function<Convexificator(const Point&)> convexificator_oracle;
    std::optional<double> lipschitz_hint;
};

/// Geometric step schedule for Dini difference quotients: probes at
/// t_k = t0 * sigma^k, k = 0..steps-1; liminf/limsup approximated by min/max
/// over the last `tail` quotients.
struct DiniSchedule {
    double t0 = 1e-2;
    double sigma = 0.5;
    int steps = 20;
    int tail = 6;
};

struct DiniEstimate {
    double lower = 0.0;
    double upper = 0.0;
    int steps_used = 0;
    DiniSchedule schedule;
};

/// Two-sided estimate of the Dini directional derivatives of f at p along v,
/// from geodesic difference quotients (f(exp_p(t v)) - f(p)) / t.
/// Throws ProbeFailure naming t_k if the evaluator goes non-finite.
DiniEstimate dini_estimate(const ScalarFunction& f, const Point& p, const Tangent& v,
                           const DiniSchedule& schedule = {});

struct ConvexificatorCheckOptions {
    double tolerance = 1e-4;  ///< dominated by finite-difference error
    DiniSchedule schedule{};
};

/// For each direction v: margin(v) = max_ξ <ξ, v> - dini_lower(v).
/// Passes iff min margin >= -tolerance. Sup over the hull equals max over
/// generators because the pairing is linear in ξ.
CheckReport upper_convexificator_check(const ScalarFunction& f, const Point& p,
                                       const Convexificator& cvx,
                                       std::span<const Tangent> directions,
                                       const ConvexificatorCheckOptions& opts = {});

/// Mirror image: margin(v) = dini_upper(v) - min_ξ <ξ, v>.
CheckReport lower_convexificator_check(const ScalarFunction& f, const Point& p,
                                       const Convexificator& cvx,
                                       std::span<const Tangent> directions,
                                       const ConvexificatorCheckOptions& opts = {});

/// Constructive mean-value witness: a point w on the open geodesic (p, q) and
/// ξ in the convex hull of the convexificator at w with
/// <ξ, P_{w,p} log_p q> = f(q) - f(p) up to `residual`.
struct MvtWitness {
    double t_star = 0.0;             ///< position of w along the geodesic
    Point w;
    Tangent xi;
    double residual = 0.0;
    std::vector<double> coefficients; ///< hull coefficients over the generators at w
};

/// Scans a uniform grid of size `grid_size` over (0, 1), testing whether the
/// target difference lies in [min, max] of the generator pairings; refines the
/// first sign change by bisection (which lands on smooth roots to machine
/// precision and on kink points to within the oracle's branch tolerance).
/// Falls back to the grid point minimizing the distance to the interval.
MvtWitness mvt_witness(const ScalarFunction& f, const Point& p, const Point& q,
                       std::size_t grid_size = 4096);

/// n directions on the metric unit sphere at p: chart-Gaussian draws
/// normalized by the metric norm (chart-uniform draws would bias the
/// half-plane metric). Deterministic per seed.
std::vector<Tangent> sample_unit_directions(const Point& p, std::size_t n, std::uint64_t seed);

} // namespace hvvi::nonsmooth
