#include "hvvi/nonsmooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hvvi/errors.hpp"
#include "hvvi/rng.hpp"

namespace hvvi::nonsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_or_throw(const ScalarFunction& f, const Point& x, double t) {
    const double v = f.evaluator(x);
    if (!std::isfinite(v))
        throw ProbeFailure("dini_estimate: evaluator non-finite at probe t=" + std::to_string(t));
    return v;
}

struct PairingInterval {
    double lo = kInf;
    double hi = -kInf;
    std::size_t argmin = 0;
    std::size_t argmax = 0;
};

PairingInterval pairing_interval(const Convexificator& cvx, const Tangent& direction) {
    PairingInterval r;
    for (std::size_t j = 0; j < cvx.generators.size(); ++j) {
        const double v = geom::metric_inner(cvx.generators[j], direction);
        if (v < r.lo) { r.lo = v; r.argmin = j; }
        if (v > r.hi) { r.hi = v; r.argmax = j; }
    }
    return r;
}

} // namespace

Convexificator make_convexificator(Point base, std::vector<std::vector<double>> generator_coords) {
    if (generator_coords.empty())
        throw ContractViolation("make_convexificator: at least one generator required");
    Convexificator c;
    c.base = std::move(base);
    c.generators.reserve(generator_coords.size());
    for (auto& g : generator_coords) c.generators.push_back(geom::make_tangent(c.base, std::move(g)));
    return c;
}

DiniEstimate dini_estimate(const ScalarFunction& f, const Point& p, const Tangent& v,
                           const DiniSchedule& schedule) {
    if (!(v.base == p)) throw ContractViolation("dini_estimate: direction not based at p");
    if (schedule.steps < 1 || schedule.tail < 1 || schedule.tail > schedule.steps)
        throw ContractViolation("dini_estimate: malformed schedule");
    if (!(schedule.t0 > 0.0) || !(schedule.sigma > 0.0 && schedule.sigma < 1.0))
        throw ContractViolation("dini_estimate: need t0 > 0 and sigma in (0,1)");
    if (schedule.t0 * std::pow(schedule.sigma, schedule.steps) < 1e-10)
        throw ContractViolation("dini_estimate: schedule descends below the 1e-10 precision floor");

    const double f0 = eval_or_throw(f, p, 0.0);
    double lower = kInf;
    double upper = -kInf;
    double t = schedule.t0;
    for (int k = 0; k < schedule.steps; ++k, t *= schedule.sigma) {
        const Point x = geom::exp_map(p, geom::scale(v, t));
        const double quotient = (eval_or_throw(f, x, t) - f0) / t;
        if (k >= schedule.steps - schedule.tail) {
            lower = std::min(lower, quotient);
            upper = std::max(upper, quotient);
        }
    }
    return DiniEstimate{lower, upper, schedule.steps, schedule};
}

namespace {

CheckReport convexificator_check(const char* name, bool upper, const ScalarFunction& f,
                                 const Point& p, const Convexificator& cvx,
                                 std::span<const Tangent> directions,
                                 const ConvexificatorCheckOptions& opts) {
    if (!(cvx.base == p)) throw ContractViolation("convexificator_check: set not based at p");
    CheckReport report;
    report.name = name;
    report.tolerance = opts.tolerance;
    report.samples = directions.size();
    report.sample_margins.reserve(directions.size());
    for (std::size_t i = 0; i < directions.size(); ++i) {
        const Tangent& v = directions[i];
        const PairingInterval pairing = pairing_interval(cvx, v);
        const DiniEstimate dini = dini_estimate(f, p, v, opts.schedule);
        const double margin = upper ? pairing.hi - dini.lower : dini.upper - pairing.lo;
        report.sample_margins.push_back(margin);
        report.sample_components.push_back(-1);
        CounterexampleRow row{i, p.coords, v.coords, -1, margin, {}};
        report.record(i, margin, std::move(row), margin < -opts.tolerance);
    }
    return report;
}

} // namespace

CheckReport upper_convexificator_check(const ScalarFunction& f, const Point& p,
                                       const Convexificator& cvx,
                                       std::span<const Tangent> directions,
                                       const ConvexificatorCheckOptions& opts) {
    return convexificator_check("upper_convexificator_check", true, f, p, cvx, directions, opts);
}

CheckReport lower_convexificator_check(const ScalarFunction& f, const Point& p,
                                       const Convexificator& cvx,
                                       std::span<const Tangent> directions,
                                       const ConvexificatorCheckOptions& opts) {
    return convexificator_check("lower_convexificator_check", false, f, p, cvx, directions, opts);
}

namespace {

struct MvtProbe {
    Point w;
    Convexificator cvx;
    Tangent carried;      // P_{w,p} log_p q
    PairingInterval pairing;
    double dist = 0.0;    // distance of target to [lo, hi]
    int side = 0;         // -1: target below interval, +1: above, 0: inside
};

MvtProbe mvt_probe(const ScalarFunction& f, const Point& p, const Tangent& direction,
                   double t, double target) {
    MvtProbe probe;
    probe.w = geom::exp_map(p, geom::scale(direction, t));
    const double fw = f.evaluator(probe.w);
    if (!std::isfinite(fw))
        throw ProbeFailure("mvt_witness: evaluator non-finite on the geodesic at t=" + std::to_string(t));
    probe.cvx = f.convexificator_oracle(probe.w);
    probe.carried = geom::parallel_transport(direction, p, probe.w);
    probe.pairing = pairing_interval(probe.cvx, probe.carried);
    if (target < probe.pairing.lo) {
        probe.side = -1;
        probe.dist = probe.pairing.lo - target;
    } else if (target > probe.pairing.hi) {
        probe.side = +1;
        probe.dist = target - probe.pairing.hi;
    }
    return probe;
}

MvtWitness witness_from_probe(const MvtProbe& probe, double t, double target) {
    MvtWitness w;
    w.t_star = t;
    w.w = probe.w;
    const std::size_t n = probe.cvx.generators.size();
    w.coefficients.assign(n, 0.0);
    const double lo = probe.pairing.lo;
    const double hi = probe.pairing.hi;
    if (probe.pairing.argmin == probe.pairing.argmax || hi <= lo) {
        w.coefficients[probe.pairing.argmin] = 1.0;
        w.xi = probe.cvx.generators[probe.pairing.argmin];
    } else {
        const double lambda = std::clamp((target - lo) / (hi - lo), 0.0, 1.0);
        w.coefficients[probe.pairing.argmin] = 1.0 - lambda;
        w.coefficients[probe.pairing.argmax] += lambda;
        w.xi = geom::add(geom::scale(probe.cvx.generators[probe.pairing.argmin], 1.0 - lambda),
                         geom::scale(probe.cvx.generators[probe.pairing.argmax], lambda));
    }
    w.residual = std::abs(geom::metric_inner(w.xi, probe.carried) - target);
    return w;
}

} // namespace

MvtWitness mvt_witness(const ScalarFunction& f, const Point& p, const Point& q,
                       std::size_t grid_size) {
    if (p == q) throw ContractViolation("mvt_witness: p and q must differ");
    if (grid_size < 1) throw ContractViolation("mvt_witness: empty grid");

    const double fp = eval_or_throw(f, p, 0.0);
    const double fq = eval_or_throw(f, q, 1.0);
    const double target = fq - fp;
    const Tangent direction = geom::log_map(p, q);

    double best_t = 0.0;
    double best_dist = kInf;
    MvtProbe best_probe;

    double prev_t = 0.0;
    int prev_side = 0;
    double flip_lo = -1.0, flip_hi = -1.0;

    for (std::size_t i = 1; i <= grid_size; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid_size + 1);
        MvtProbe probe = mvt_probe(f, p, direction, t, target);
        if (probe.side == 0) return witness_from_probe(probe, t, target);
        if (probe.dist < best_dist) {
            best_dist = probe.dist;
            best_t = t;
            best_probe = probe;
        }
        if (prev_side != 0 && probe.side != prev_side && flip_lo < 0.0) {
            flip_lo = prev_t;
            flip_hi = t;
        }
        prev_side = probe.side;
        prev_t = t;
    }

    if (flip_lo >= 0.0) {
        // Bisect the first sign change. At a smooth crossing this converges to
        // the root; at a kink the interval collapses onto the branch point,
        // where the oracle's two-sided set absorbs the target.
        double lo = flip_lo, hi = flip_hi;
        MvtProbe plo = mvt_probe(f, p, direction, lo, target);
        for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            MvtProbe pm = mvt_probe(f, p, direction, mid, target);
            if (pm.side == 0) return witness_from_probe(pm, mid, target);
            if (pm.dist < best_dist) {
                best_dist = pm.dist;
                best_t = mid;
                best_probe = pm;
            }
            if (pm.side == plo.side) {
                lo = mid;
                plo = pm;
            } else {
                hi = mid;
            }
        }
    }
    return witness_from_probe(best_probe, best_t, target);
}

std::vector<Tangent> sample_unit_directions(const Point& p, std::size_t n, std::uint64_t seed) {
    RandomStream stream(seed, "unit-directions");
    const std::size_t dim = p.coords.size();
    std::vector<Tangent> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> g(dim);
        double norm2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            g[d] = stream.normal(i, d);
            norm2 += g[d] * g[d];
        }
        if (norm2 == 0.0) g[0] = 1.0;  // measure-zero fallback
        Tangent v{p, std::move(g)};
        out.push_back(geom::scale(v, 1.0 / geom::metric_norm(v)));
    }
    return out;
}

} // namespace hvvi::nonsmooth
