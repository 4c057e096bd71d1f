#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hvvi/check_report.hpp"
#include "hvvi/nonsmooth.hpp"

namespace hvvi::convexity {

using geom::Point;
using geom::Tangent;
using nonsmooth::Convexificator;
using nonsmooth::ScalarFunction;

/// m scalar objectives sharing one manifold.
struct VectorFunction {
    std::vector<ScalarFunction> components;

    std::size_t size() const { return components.size(); }
    std::vector<double> values(const Point& p) const;
    std::vector<Convexificator> convexificators(const Point& p) const;
};

using PairingVector = std::vector<double>;

/// Component i = <selection[i], u> at the common base point.
PairingVector pairing(std::span<const Tangent> selection, const Tangent& u);

struct MarginCheckOptions {
    double tolerance = 1e-8;    ///< absolute margin tolerance for >= checks
    double strict_min = 1e-10;  ///< strict mode requires margin > +strict_min
};

/// Componentwise subgradient-type inequality at base against every generator
/// tuple (cross product over components): for every probe p,
///   F(p) - F(base) - <ξ*, log_base p> >= -tol  (strict: > strict_min, p != base).
/// The margin is affine in each ξ_i, so generator tuples decide the hull.
CheckReport convexity_check(const VectorFunction& F, const Point& base,
                            std::span<const Point> probes, bool strict,
                            const MarginCheckOptions& opts = {});

/// Monotonicity of the convexificator map: for every pair (p, q) and every
/// generator tuple pair (ξ at p, ζ at q),
///   <P_{q,p} ξ - ζ, log_q p> >= -tol componentwise (strict: > strict_min).
CheckReport monotonicity_check(const VectorFunction& F,
                               std::span<const std::pair<Point, Point>> pairs, bool strict,
                               const MarginCheckOptions& opts = {});

struct SecantCheckOptions {
    double tolerance = 1e-8;
    double endpoint_tolerance = 1e-10;  ///< mu in {0,1} must hold with equality
};

/// Chord-above-graph inequality along geodesics: for each pair (p, q) and
/// each mu in [0, 1],
///   F(exp_q(mu log_q p)) <= F(q) + mu (F(p) - F(q)) componentwise.
CheckReport secant_check(const VectorFunction& F,
                         std::span<const std::pair<Point, Point>> pairs,
                         std::span<const double> mu_grid,
                         const SecantCheckOptions& opts = {});

} // namespace hvvi::convexity
