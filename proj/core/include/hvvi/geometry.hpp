#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace hvvi::geom {

/// The supported Hadamard manifolds: flat Euclidean space of any dimension
/// and the Poincaré upper half-plane {(x, y) : y > 0} with metric
/// g_ij(x, y) = δ_ij / y².
enum class ManifoldKind { Euclidean, PoincareHalfPlane };

struct Manifold {
    ManifoldKind kind = ManifoldKind::Euclidean;
    int dim = 1;

    static Manifold euclidean(int n);
    static Manifold half_plane();

    bool operator==(const Manifold&) const = default;
};

/// A manifold point in the fixed global chart.
struct Point {
    Manifold manifold;
    std::vector<double> coords;

    bool operator==(const Point&) const = default;
};

/// A tangent vector anchored at `base`, in chart-basis coordinates.
struct Tangent {
    Point base;
    std::vector<double> coords;
};

/// w = exp_p(s · log_p q) together with the data that produced it.
struct GeodesicSplit {
    Point p;
    Point q;
    double s = 0.5;
    Point w;
};

/// Geometry tolerances used by validation helpers and property suites.
struct GeometryTolerances {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
};

/// Validating constructors. Throw ContractViolation on non-finite coords,
/// dimension mismatch, or y <= 0 on the half-plane.
Point make_point(const Manifold& m, std::vector<double> coords);
Tangent make_tangent(Point base, std::vector<double> coords);

Tangent zero_tangent(const Point& p);
Tangent scale(const Tangent& u, double c);
Tangent add(const Tangent& u, const Tangent& v);
Tangent subtract(const Tangent& u, const Tangent& v);

/// Riemannian inner product of two tangents at the same base point.
/// Euclidean: dot product. Half-plane: dot(u, v) / y².
double metric_inner(const Tangent& u, const Tangent& v);
double metric_norm(const Tangent& u);

/// Point reached at time 1 along the geodesic from p with initial velocity v.
Point exp_map(const Point& p, const Tangent& v);

/// Inverse exponential map: the unique v with exp_p(v) = q (globally defined
/// on Hadamard manifolds). ||log_map(p, q)|| = distance(p, q).
Tangent log_map(const Point& p, const Point& q);

/// Riemannian distance. Half-plane closed form:
/// d = 2 asinh(|q - p| / (2 sqrt(p2 q2))).
double distance(const Point& p, const Point& q);

/// Parallel transport of `u` (based at `from`) along the minimal geodesic to
/// `to`. An isometry; the identity when from == to. On the half-plane it is
/// computed exactly by decomposing along the unit geodesic velocity and its
/// metric-orthogonal rotation, each of which is a parallel field in 2-D.
Tangent parallel_transport(const Tangent& u, const Point& from, const Point& to);

/// Split the geodesic from p to q at parameter s in (0, 1).
GeodesicSplit split_geodesic(const Point& p, const Point& q, double s);

/// Residual norms of the three splitting identities satisfied by a
/// GeodesicSplit:
///   [0]  exp_w⁻¹ p + s · P_{w,p} exp_p⁻¹ q
///   [1]  exp_w⁻¹ q − (1−s) · P_{w,p} exp_p⁻¹ q
///   [2]  exp_w⁻¹ p − s · P_{w,q} exp_q⁻¹ p
std::array<double, 3> split_residuals(const GeodesicSplit& split);

} // namespace hvvi::geom
