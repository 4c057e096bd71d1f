#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hvvi/convexity.hpp"
#include "hvvi/geometry.hpp"

namespace hvvi::catalog {

using convexity::VectorFunction;
using geom::Manifold;
using geom::Point;
using nonsmooth::Convexificator;

enum class ConvexityStatus { Convex, StrictlyConvex, Nonconvex, Unknown };

std::string to_string(ConvexityStatus status);

/// Geodesic ball: the only region shape (chart boxes are not geodesically
/// convex on the half-plane).
struct Region {
    Point center;
    double radius = 1.0;
};

/// A built-in problem instance. `candidate` is the distinguished point used
/// by the single-candidate VVI and convexity suites; `kinked` selects the
/// mean-value residual threshold class.
struct CatalogEntry {
    std::string id;
    std::string summary;
    Manifold manifold;
    VectorFunction F;
    Region region;
    Point candidate;
    ConvexityStatus status = ConvexityStatus::Unknown;
    bool kinked = false;
};

const std::vector<CatalogEntry>& entries();

/// Throws NotFoundError listing the available ids.
const CatalogEntry& catalog_lookup(std::string_view id);

/// n points exp_center(r·u) with u uniform on the metric unit sphere and
/// r = radius·U^(1/dim); deterministic per seed, all within the radius.
std::vector<Point> sample_region(const Region& region, std::size_t n, std::uint64_t seed);

/// Pairs of independently sampled region points, e.g. for monotonicity and
/// secant checks.
std::vector<std::pair<Point, Point>> sample_region_pairs(const Region& region, std::size_t n,
                                                         std::uint64_t seed);

/// Chart grid over the region's bounding box, filtered to the geodesic ball,
/// truncated to exactly `count` points (row-major order). Deterministic.
std::vector<Point> candidate_grid(const Region& region, std::size_t count);

/// Literal piecewise generator tables for the built-in kinked objective pair
/// on the half-plane (component 1: |x| + y ln y, component 2: |x| + y²):
///   which=1: {(sign x, 1+ln y)} off the axis, both signs on it;
///   which=2: {(sign x, 2y)}     off the axis, both signs on it.
/// The axis test is |x| <= 1e-12. These are chart gradients; the catalog
/// entry's oracle rescales them by y² so they pair correctly under the
/// half-plane metric (the two coincide at y = 1).
Convexificator kinked_pair_table(int which, const Point& p);

} // namespace hvvi::catalog
