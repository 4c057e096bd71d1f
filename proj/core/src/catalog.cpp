#include "hvvi/catalog.hpp"

#include <cmath>
#include <utility>

#include "hvvi/errors.hpp"
#include "hvvi/rng.hpp"

namespace hvvi::catalog {

namespace {

using geom::Tangent;
using nonsmooth::ScalarFunction;

constexpr double kAxisTol = 1e-12;

ScalarFunction squared_distance_to(const Point& anchor, double sign) {
    return ScalarFunction{
        [anchor, sign](const Point& p) {
            const double d = geom::distance(p, anchor);
            return sign * d * d;
        },
        [anchor, sign](const Point& p) {
            // Gradient of ±d²(·, anchor) is ∓2 log_p(anchor).
            Convexificator c;
            c.base = p;
            c.generators.push_back(geom::scale(geom::log_map(p, anchor), -2.0 * sign));
            return c;
        },
        std::nullopt};
}

ScalarFunction euclidean_quadratic(std::vector<double> center) {
    return ScalarFunction{
        [center](const Point& p) {
            double s = 0.0;
            for (std::size_t i = 0; i < center.size(); ++i) {
                const double d = p.coords[i] - center[i];
                s += d * d;
            }
            return s;
        },
        [center](const Point& p) {
            Convexificator c;
            c.base = p;
            std::vector<double> g(center.size());
            for (std::size_t i = 0; i < center.size(); ++i) g[i] = 2.0 * (p.coords[i] - center[i]);
            c.generators.push_back(geom::make_tangent(p, std::move(g)));
            return c;
        },
        std::nullopt};
}

ScalarFunction negated(ScalarFunction f) {
    return ScalarFunction{
        [inner = f.evaluator](const Point& p) { return -inner(p); },
        [inner = f.convexificator_oracle](const Point& p) {
            Convexificator c = inner(p);
            for (Tangent& g : c.generators) g = geom::scale(g, -1.0);
            return c;
        },
        f.lipschitz_hint};
}

/// Component evaluators of the kinked half-plane pair.
double kinked_value(int which, const Point& p) {
    const double x = p.coords[0];
    const double y = p.coords[1];
    return std::abs(x) + (which == 1 ? y * std::log(y) : y * y);
}

/// The catalog oracle: the chart tables rescaled by y², which makes them the
/// metric-correct generator sets at every half-plane point.
Convexificator kinked_pair_metric_oracle(int which, const Point& p) {
    Convexificator c = kinked_pair_table(which, p);
    const double y2 = p.coords[1] * p.coords[1];
    for (Tangent& g : c.generators) g = geom::scale(g, y2);
    return c;
}

ScalarFunction kinked_component(int which) {
    return ScalarFunction{
        [which](const Point& p) { return kinked_value(which, p); },
        [which](const Point& p) { return kinked_pair_metric_oracle(which, p); },
        std::nullopt};
}

std::vector<CatalogEntry> build_entries() {
    const Manifold hp = Manifold::half_plane();
    const Manifold e2 = Manifold::euclidean(2);
    const Manifold e1 = Manifold::euclidean(1);
    const double e = std::exp(1.0);

    std::vector<CatalogEntry> out;

    {
        CatalogEntry entry;
        entry.id = "example-4.1";
        entry.summary = "two-objective kinked pair (|x|+y ln y, |x|+y^2) on the half-plane";
        entry.manifold = hp;
        entry.F.components = {kinked_component(1), kinked_component(2)};
        entry.region = Region{geom::make_point(hp, {0.0, e * e}), 2.0};
        entry.candidate = geom::make_point(hp, {0.0, 1.0});
        entry.status = ConvexityStatus::Unknown;
        entry.kinked = true;
        out.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.id = "sqdist-halfplane";
        entry.summary = "squared geodesic distance to (0,1) on the half-plane";
        entry.manifold = hp;
        const Point anchor = geom::make_point(hp, {0.0, 1.0});
        entry.F.components = {squared_distance_to(anchor, +1.0)};
        entry.region = Region{anchor, 2.0};
        entry.candidate = anchor;
        entry.status = ConvexityStatus::StrictlyConvex;
        out.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.id = "neg-sqdist-halfplane";
        entry.summary = "negated squared geodesic distance to (0,1): nonconvex control";
        entry.manifold = hp;
        const Point anchor = geom::make_point(hp, {0.0, 1.0});
        entry.F.components = {squared_distance_to(anchor, -1.0)};
        entry.region = Region{anchor, 2.0};
        entry.candidate = anchor;
        entry.status = ConvexityStatus::Nonconvex;
        out.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.id = "euclid-quad2";
        entry.summary = "two shifted quadratics on R^2; Pareto set is the segment (0,0)-(1,0)";
        entry.manifold = e2;
        entry.F.components = {euclidean_quadratic({0.0, 0.0}), euclidean_quadratic({1.0, 0.0})};
        entry.region = Region{geom::make_point(e2, {0.5, 0.0}), 2.0};
        entry.candidate = geom::make_point(e2, {0.5, 0.0});
        entry.status = ConvexityStatus::StrictlyConvex;
        out.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.id = "euclid-quad1d";
        entry.summary = "two shifted quadratics on R; Pareto set is [0, 2]";
        entry.manifold = e1;
        entry.F.components = {euclidean_quadratic({0.0}), euclidean_quadratic({2.0})};
        entry.region = Region{geom::make_point(e1, {1.0}), 3.0};
        entry.candidate = geom::make_point(e1, {1.0});
        entry.status = ConvexityStatus::StrictlyConvex;
        out.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.id = "euclid-negquad";
        entry.summary = "negated quadratic on R^2: nonconvex control";
        entry.manifold = e2;
        entry.F.components = {negated(euclidean_quadratic({0.0, 0.0}))};
        entry.region = Region{geom::make_point(e2, {0.0, 0.0}), 2.0};
        entry.candidate = geom::make_point(e2, {0.0, 0.0});
        entry.status = ConvexityStatus::Nonconvex;
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace

std::string to_string(ConvexityStatus status) {
    switch (status) {
        case ConvexityStatus::Convex: return "convex";
        case ConvexityStatus::StrictlyConvex: return "strictly-convex";
        case ConvexityStatus::Nonconvex: return "nonconvex";
        case ConvexityStatus::Unknown: return "unknown";
    }
    return "?";
}

const std::vector<CatalogEntry>& entries() {
    static const std::vector<CatalogEntry> table = build_entries();
    return table;
}

const CatalogEntry& catalog_lookup(std::string_view id) {
    for (const CatalogEntry& entry : entries())
        if (entry.id == id) return entry;
    std::string msg = "catalog_lookup: unknown id '" + std::string(id) + "'; available:";
    for (const CatalogEntry& entry : entries()) msg += " " + entry.id;
    throw NotFoundError(msg);
}

std::vector<Point> sample_region(const Region& region, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ContractViolation("sample_region: n must be >= 1");
    RandomStream stream(seed, "sample-region");
    const std::size_t dim = region.center.coords.size();
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> g(dim);
        double norm2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            g[d] = stream.normal(i, d);
            norm2 += g[d] * g[d];
        }
        if (norm2 == 0.0) g[0] = 1.0;
        Tangent direction{region.center, std::move(g)};
        direction = geom::scale(direction, 1.0 / geom::metric_norm(direction));
        const double u = stream.uniform(i, 2 * dim);
        const double r = region.radius * std::pow(u, 1.0 / static_cast<double>(dim));
        out.push_back(geom::exp_map(region.center, geom::scale(direction, r)));
    }
    return out;
}

std::vector<std::pair<Point, Point>> sample_region_pairs(const Region& region, std::size_t n,
                                                         std::uint64_t seed) {
    const std::vector<Point> flat = sample_region(region, 2 * n, seed);
    std::vector<std::pair<Point, Point>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(flat[2 * i], flat[2 * i + 1]);
    return out;
}

std::vector<Point> candidate_grid(const Region& region, std::size_t count) {
    if (count < 1) throw ContractViolation("candidate_grid: count must be >= 1");
    const Manifold& m = region.center.manifold;

    if (m.dim == 1) {
        std::vector<Point> out;
        out.reserve(count);
        const double lo = region.center.coords[0] - region.radius;
        const double hi = region.center.coords[0] + region.radius;
        for (std::size_t i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
            out.push_back(geom::make_point(m, {lo + t * (hi - lo)}));
        }
        return out;
    }

    // Bounding box of the geodesic ball. On the half-plane the ball of
    // radius r about (cx, cy) is the Euclidean disk centered (cx, cy cosh r)
    // with radius cy sinh r.
    double x_lo, x_hi, y_lo, y_hi;
    if (m.kind == geom::ManifoldKind::PoincareHalfPlane) {
        const double cx = region.center.coords[0];
        const double cy = region.center.coords[1];
        const double half_width = cy * std::sinh(region.radius);
        x_lo = cx - half_width;
        x_hi = cx + half_width;
        y_lo = cy * std::exp(-region.radius);
        y_hi = cy * std::exp(region.radius);
    } else {
        x_lo = region.center.coords[0] - region.radius;
        x_hi = region.center.coords[0] + region.radius;
        y_lo = region.center.coords[1] - region.radius;
        y_hi = region.center.coords[1] + region.radius;
    }

    // Grow the grid until the ball contains enough nodes, then truncate.
    for (std::size_t k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));;
         ++k) {
        std::vector<Point> out;
        for (std::size_t i = 0; i < k && out.size() < count; ++i) {
            for (std::size_t j = 0; j < k && out.size() < count; ++j) {
                const double tx = k == 1 ? 0.5 : static_cast<double>(j) / (k - 1);
                const double ty = k == 1 ? 0.5 : static_cast<double>(i) / (k - 1);
                const double x = x_lo + tx * (x_hi - x_lo);
                const double y = y_lo + ty * (y_hi - y_lo);
                if (m.kind == geom::ManifoldKind::PoincareHalfPlane && !(y > 0.0)) continue;
                Point p = geom::make_point(m, {x, y});
                if (geom::distance(region.center, p) <= region.radius) out.push_back(std::move(p));
            }
        }
        if (out.size() == count) return out;
        if (k > 4096) throw ContractViolation("candidate_grid: region cannot host the requested grid");
    }
}

Convexificator kinked_pair_table(int which, const Point& p) {
    if (which != 1 && which != 2) throw ContractViolation("kinked_pair_table: which must be 1 or 2");
    if (p.manifold.kind != geom::ManifoldKind::PoincareHalfPlane)
        throw ContractViolation("kinked_pair_table: point must lie on the half-plane");
    const double x = p.coords[0];
    const double y = p.coords[1];
    const double second = which == 1 ? 1.0 + std::log(y) : 2.0 * y;

    Convexificator c;
    c.base = p;
    if (std::abs(x) <= kAxisTol) {
        c.generators.push_back(geom::make_tangent(p, {1.0, second}));
        c.generators.push_back(geom::make_tangent(p, {-1.0, second}));
    } else {
        c.generators.push_back(geom::make_tangent(p, {x > 0.0 ? 1.0 : -1.0, second}));
    }
    return c;
}

} // namespace hvvi::catalog
