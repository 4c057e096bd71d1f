#include "hvvi/geometry.hpp"

#include <cmath>
#include <string>

#include "hvvi/errors.hpp"

namespace hvvi::geom {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double enorm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void require_same_base(const Tangent& u, const Tangent& v, const char* op) {
    if (!(u.base == v.base))
        throw ContractViolation(std::string(op) + ": tangents have different base points");
}

void require_same_manifold(const Point& p, const Point& q, const char* op) {
    if (!(p.manifold == q.manifold))
        throw ContractViolation(std::string(op) + ": points live on different manifolds");
}

} // namespace

Manifold Manifold::euclidean(int n) {
    if (n < 1) throw ContractViolation("Manifold::euclidean: dimension must be >= 1");
    return Manifold{ManifoldKind::Euclidean, n};
}

Manifold Manifold::half_plane() { return Manifold{ManifoldKind::PoincareHalfPlane, 2}; }

Point make_point(const Manifold& m, std::vector<double> coords) {
    if (static_cast<int>(coords.size()) != m.dim)
        throw ContractViolation("make_point: coordinate count does not match manifold dimension");
    if (!all_finite(coords)) throw ContractViolation("make_point: non-finite coordinate");
    if (m.kind == ManifoldKind::PoincareHalfPlane && !(coords[1] > 0.0))
        throw ContractViolation("make_point: half-plane requires y > 0");
    return Point{m, std::move(coords)};
}

Tangent make_tangent(Point base, std::vector<double> coords) {
    if (coords.size() != base.coords.size())
        throw ContractViolation("make_tangent: coordinate count does not match base dimension");
    if (!all_finite(coords)) throw ContractViolation("make_tangent: non-finite coordinate");
    return Tangent{std::move(base), std::move(coords)};
}

Tangent zero_tangent(const Point& p) {
    return Tangent{p, std::vector<double>(p.coords.size(), 0.0)};
}

Tangent scale(const Tangent& u, double c) {
    Tangent r = u;
    for (double& x : r.coords) x *= c;
    return r;
}

Tangent add(const Tangent& u, const Tangent& v) {
    require_same_base(u, v, "add");
    Tangent r = u;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += v.coords[i];
    return r;
}

Tangent subtract(const Tangent& u, const Tangent& v) {
    require_same_base(u, v, "subtract");
    Tangent r = u;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= v.coords[i];
    return r;
}

double metric_inner(const Tangent& u, const Tangent& v) {
    require_same_base(u, v, "metric_inner");
    const double d = dot(u.coords, v.coords);
    if (u.base.manifold.kind == ManifoldKind::PoincareHalfPlane) {
        const double y = u.base.coords[1];
        return d / (y * y);
    }
    return d;
}

double metric_norm(const Tangent& u) {
    const double n = enorm(u.coords);
    if (u.base.manifold.kind == ManifoldKind::PoincareHalfPlane) return n / u.base.coords[1];
    return n;
}

Point exp_map(const Point& p, const Tangent& v) {
    if (!(v.base == p)) throw ContractViolation("exp_map: tangent not based at p");
    if (p.manifold.kind == ManifoldKind::Euclidean) {
        std::vector<double> c = p.coords;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += v.coords[i];
        return Point{p.manifold, std::move(c)};
    }
    // Half-plane. Unit-speed geodesics are semicircles centered on the
    // boundary axis (vertical rays in the limit); both cases collapse to one
    // closed form. With n = |v|, t = n/p2, c = v2/n and
    // D = cosh t - c sinh t:
    //   x = p1 + p2 (v1/n) sinh t / D,   y = p2 / D.
    // D is evaluated as e^t (1-c)/2 + e^-t (1+c)/2 with 1 -/+ c recovered
    // from v1^2, which avoids the cancellation that otherwise dominates the
    // roundtrip error on long near-vertical geodesics.
    const double n = enorm(v.coords);
    if (n == 0.0) return p;
    const double v1 = v.coords[0];
    const double v2 = v.coords[1];
    const double p2 = p.coords[1];
    const double t = n / p2;
    const double et = std::exp(t);
    const double emt = std::exp(-t);
    double one_minus_c, one_plus_c;
    if (v2 >= 0.0) {
        one_minus_c = v1 * v1 / (n * (n + v2));
        one_plus_c = 2.0 - one_minus_c;
    } else {
        one_plus_c = v1 * v1 / (n * (n - v2));
        one_minus_c = 2.0 - one_plus_c;
    }
    const double d = 0.5 * (et * one_minus_c + emt * one_plus_c);
    const double sh = 0.5 * (et - emt);
    const double x = p.coords[0] + p2 * (v1 / n) * sh / d;
    const double y = p2 / d;
    return make_point(p.manifold, {x, y});
}

double distance(const Point& p, const Point& q) {
    require_same_manifold(p, q, "distance");
    if (p.manifold.kind == ManifoldKind::Euclidean) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.coords.size(); ++i) {
            const double d = q.coords[i] - p.coords[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    const double dx = q.coords[0] - p.coords[0];
    const double dy = q.coords[1] - p.coords[1];
    const double e = std::sqrt(dx * dx + dy * dy);
    return 2.0 * std::asinh(0.5 * e / std::sqrt(p.coords[1] * q.coords[1]));
}

Tangent log_map(const Point& p, const Point& q) {
    require_same_manifold(p, q, "log_map");
    if (p.manifold.kind == ManifoldKind::Euclidean) {
        std::vector<double> c(p.coords.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = q.coords[i] - p.coords[i];
        return Tangent{p, std::move(c)};
    }
    // Inverse of the exp_map closed form above. sinh t comes from the
    // half-angle value z = sinh(t/2) of the distance formula, and the
    // cosh t - p2/q2 factor collapses to (dx^2 + dy (p2+q2)) / (2 p2 q2),
    // which is free of large-term cancellation.
    const double p2 = p.coords[1];
    const double q2 = q.coords[1];
    const double dx = q.coords[0] - p.coords[0];
    const double dy = q.coords[1] - p.coords[1];
    const double e = dx * dx + dy * dy;
    if (e == 0.0) return zero_tangent(p);
    const double z = 0.5 * std::sqrt(e) / std::sqrt(p2 * q2);
    const double t = 2.0 * std::asinh(z);
    const double sh = 2.0 * z * std::sqrt(1.0 + z * z);
    const double v1 = t * p2 * dx / (q2 * sh);
    const double v2 = t * (dx * dx + dy * (p2 + q2)) / (2.0 * q2 * sh);
    return Tangent{p, {v1, v2}};
}

Tangent parallel_transport(const Tangent& u, const Point& from, const Point& to) {
    if (!(u.base == from)) throw ContractViolation("parallel_transport: tangent not based at `from`");
    require_same_manifold(from, to, "parallel_transport");
    if (from.manifold.kind == ManifoldKind::Euclidean) return Tangent{to, u.coords};
    if (from == to) return u;

    const double t = distance(from, to);
    const Tangent tp = scale(log_map(from, to), 1.0 / t);  // unit velocity at `from`
    const Tangent tq = scale(log_map(to, from), -1.0 / t); // same geodesic's velocity at `to`
    // The conformal metric preserves chart angles, so the 90-degree chart
    // rotation of a metric-unit vector is the metric-orthogonal unit normal.
    const Tangent np{from, {-tp.coords[1], tp.coords[0]}};
    const Tangent nq{to, {-tq.coords[1], tq.coords[0]}};
    const double a = metric_inner(u, tp);
    const double b = metric_inner(u, np);
    return Tangent{to, {a * tq.coords[0] + b * nq.coords[0], a * tq.coords[1] + b * nq.coords[1]}};
}

GeodesicSplit split_geodesic(const Point& p, const Point& q, double s) {
    require_same_manifold(p, q, "split_geodesic");
    if (!(s > 0.0 && s < 1.0)) throw ContractViolation("split_geodesic: s must lie in (0, 1)");
    const Point w = exp_map(p, scale(log_map(p, q), s));
    return GeodesicSplit{p, q, s, w};
}

std::array<double, 3> split_residuals(const GeodesicSplit& split) {
    const Point& p = split.p;
    const Point& q = split.q;
    const Point& w = split.w;
    const double s = split.s;

    const Tangent log_w_p = log_map(w, p);
    const Tangent log_w_q = log_map(w, q);
    const Tangent carried_pq = parallel_transport(log_map(p, q), p, w);
    const Tangent carried_qp = parallel_transport(log_map(q, p), q, w);

    const Tangent r0 = add(log_w_p, scale(carried_pq, s));
    const Tangent r1 = subtract(log_w_q, scale(carried_pq, 1.0 - s));
    const Tangent r2 = subtract(log_w_p, scale(carried_qp, s));
    return {metric_norm(r0), metric_norm(r1), metric_norm(r2)};
}

} // namespace hvvi::geom
