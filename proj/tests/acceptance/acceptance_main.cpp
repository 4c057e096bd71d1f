// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Budgets and tolerances are pinned here; each criterion is expected to
// finish well under a minute.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hvvi/catalog.hpp"
#include "hvvi/convexity.hpp"
#include "hvvi/geometry.hpp"
#include "hvvi/nonsmooth.hpp"
#include "hvvi/parallel.hpp"
#include "hvvi/rng.hpp"
#include "hvvi/runner.hpp"
#include "hvvi/vvi.hpp"
#include "support/ode_oracles.hpp"

using namespace hvvi;
using geom::Manifold;
using geom::Point;
using geom::Tangent;

namespace {

constexpr std::uint64_t kSeed = 20250617ull;
constexpr int kWorkers = 4;

int failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion, title,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename Fn>
void timed(int criterion, const char* title, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(criterion, title, ok, detail, seconds);
}

Point hp(double x, double y) { return geom::make_point(Manifold::half_plane(), {x, y}); }

struct Welford {
    double worst = -1e300;
    void update(double v) { worst = std::max(worst, v); }
};

// --------------------------------------------------------------------------
// 1. Geometry at scale: closed forms and ODE oracles.

bool criterion1(std::string& detail) {
    const catalog::Region ball{hp(0, 1), 5.0};
    const std::size_t n = 100000;
    const auto points = catalog::sample_region(ball, 2 * n, kSeed);
    RandomStream stream(kSeed, "acceptance-geometry");

    std::vector<double> roundtrip(n), dist_agree(n), drift(n);
    parallel_for(n, kWorkers, [&](std::size_t i) {
        const Point& p = points[2 * i];
        const Point& q = points[2 * i + 1];
        const double d = geom::distance(p, q);
        const Tangent lg = geom::log_map(p, q);
        roundtrip[i] = geom::distance(geom::exp_map(p, lg), q) / (1.0 + d);
        dist_agree[i] = std::abs(geom::metric_norm(lg) - d);
        Tangent u{p, {stream.normal(i, 0), stream.normal(i, 1)}};
        Tangent v{p, {stream.normal(i, 2), stream.normal(i, 3)}};
        u = geom::scale(u, 1.0 / geom::metric_norm(u));
        v = geom::scale(v, 1.0 / geom::metric_norm(v));
        drift[i] = std::abs(geom::metric_inner(geom::parallel_transport(u, p, q),
                                               geom::parallel_transport(v, p, q)) -
                            geom::metric_inner(u, v));
    });
    Welford w_round, w_dist, w_drift;
    for (std::size_t i = 0; i < n; ++i) {
        w_round.update(roundtrip[i]);
        w_dist.update(dist_agree[i]);
        w_drift.update(drift[i]);
    }

    const std::size_t n_split = 10000;
    std::vector<double> split_worst(n_split);
    parallel_for(n_split, kWorkers, [&](std::size_t i) {
        const Point& p = points[2 * i];
        const Point& q = points[2 * i + 1];
        const double s = 1e-3 + 0.998 * stream.uniform(i, 9);
        const auto residuals = geom::split_residuals(geom::split_geodesic(p, q, s));
        split_worst[i] = std::max({residuals[0], residuals[1], residuals[2]});
    });
    Welford w_split;
    for (double r : split_worst) w_split.update(r);

    // ODE oracles on 100 cases.
    Welford w_ode;
    for (std::size_t i = 0; i < 200; i += 2) {
        const Point& p = points[i];
        const Point& q = points[i + 1];
        w_ode.update(geom::distance(testing::exp_map_ode(p, geom::log_map(p, q)), q));
        Tangent u{p, {stream.normal(i, 20), stream.normal(i, 21)}};
        u = geom::scale(u, 1.0 / geom::metric_norm(u));
        const Tangent closed = geom::parallel_transport(u, p, q);
        const Tangent by_ode = testing::parallel_transport_ode(u, p, q);
        w_ode.update(std::hypot(closed.coords[0] - by_ode.coords[0],
                                closed.coords[1] - by_ode.coords[1]));
    }

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "roundtrip %.2e (<1e-9), dist %.2e (<1e-9), transport %.2e (<1e-9), "
                  "split %.2e (<1e-8), ode %.2e (<1e-6)",
                  w_round.worst, w_dist.worst, w_drift.worst, w_split.worst, w_ode.worst);
    detail = buf;
    return w_round.worst < 1e-9 && w_dist.worst < 1e-9 && w_drift.worst < 1e-9 &&
           w_split.worst < 1e-8 && w_ode.worst < 1e-6;
}

// --------------------------------------------------------------------------
// 2. Kinked-pair reproduction: convexificator tables + Stampacchia at (0,1).

bool criterion2(std::string& detail) {
    const auto& entry = catalog::catalog_lookup("example-4.1");
    const std::size_t n_points = 100;
    const std::size_t n_dirs = 1000;
    // Table checks sample the candidate's neighborhood (all three branch
    // rows, moderate curvature); the Stampacchia run uses the entry region.
    const catalog::Region table_region{entry.candidate, 2.0};
    const auto points = catalog::sample_region(table_region, n_points, kSeed + 1);
    RandomStream stream(kSeed, "acceptance-cvx");

    std::vector<double> point_worst(n_points);
    parallel_for(n_points, kWorkers, [&](std::size_t i) {
        const Point& p = points[i];
        const auto dirs = nonsmooth::sample_unit_directions(p, n_dirs, stream.bits(i));
        double worst = 1e300;
        for (std::size_t c = 0; c < entry.F.size(); ++c) {
            const auto& f = entry.F.components[c];
            const auto cvx = f.convexificator_oracle(p);
            const auto upper = nonsmooth::upper_convexificator_check(f, p, cvx, dirs);
            const auto lower = nonsmooth::lower_convexificator_check(f, p, cvx, dirs);
            worst = std::min({worst, upper.worst_margin, lower.worst_margin});
        }
        point_worst[i] = worst;
    });
    double worst_margin = 1e300;
    for (double m : point_worst) worst_margin = std::min(worst_margin, m);

    const auto q_samples = catalog::sample_region(entry.region, 10000, kSeed + 2);
    const auto verdict = vvi::stampacchia_check(entry.F, entry.candidate, q_samples);
    std::size_t violations = 0;
    for (double m : verdict.sample_margins)
        if (m < -1e-8) ++violations;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "table margin %.2e (>-1e-4) on %zux%zu, stampacchia violations %zu/10000 "
                  "at (0,1), worst %.2e",
                  worst_margin, n_points, n_dirs, violations, verdict.worst_margin);
    detail = buf;
    return worst_margin > -1e-4 && violations == 0 && verdict.passed();
}

// --------------------------------------------------------------------------
// 3. Mean value witnesses across the catalog.

bool criterion3(std::string& detail) {
    bool ok = true;
    std::string worst_entry;
    double worst_ratio = 0.0;
    for (const auto& entry : catalog::entries()) {
        const double threshold = entry.kinked ? 1e-4 : 1e-6;
        const auto pairs = catalog::sample_region_pairs(entry.region, 100, kSeed + 3);
        std::vector<double> residuals(pairs.size(), 0.0);
        std::vector<char> monotone_ok(pairs.size(), 1);
        parallel_for(pairs.size(), kWorkers, [&](std::size_t i) {
            const auto& [p, q] = pairs[i];
            if (p.coords == q.coords) return;
            for (const auto& component : entry.F.components) {
                const auto fine = nonsmooth::mvt_witness(component, p, q, 10000);
                residuals[i] = std::max(residuals[i], fine.residual);
                const auto coarse = nonsmooth::mvt_witness(component, p, q, 100);
                if (fine.residual > coarse.residual + 1e-12) monotone_ok[i] = 0;
            }
        });
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (residuals[i] / threshold > worst_ratio) {
                worst_ratio = residuals[i] / threshold;
                worst_entry = entry.id;
            }
            if (residuals[i] >= threshold || !monotone_ok[i]) ok = false;
        }
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "worst residual/threshold %.3f (%s), refinement monotone",
                  worst_ratio, worst_entry.c_str());
    detail = buf;
    return ok;
}

// --------------------------------------------------------------------------
// 4. Convexity <-> monotonicity on controls.

bool criterion4(std::string& detail) {
    bool ok = true;
    std::string notes;
    for (const char* id : {"sqdist-halfplane", "euclid-quad2"}) {
        const auto& entry = catalog::catalog_lookup(id);
        const auto probes = catalog::sample_region(entry.region, 1000, kSeed + 4);
        const auto pairs = catalog::sample_region_pairs(entry.region, 1000, kSeed + 5);
        const auto conv = convexity::convexity_check(entry.F, entry.candidate, probes, false);
        const auto mono = convexity::monotonicity_check(entry.F, pairs, false);
        const auto conv_strict = convexity::convexity_check(entry.F, entry.candidate, probes, true);
        const auto mono_strict = convexity::monotonicity_check(entry.F, pairs, true);
        const bool entry_ok = conv.passed && mono.passed && conv.worst_margin >= -1e-8 &&
                              mono.worst_margin >= -1e-8 && conv_strict.passed &&
                              mono_strict.passed;
        ok = ok && entry_ok;
        notes += std::string(id) + (entry_ok ? " ok; " : " FAILED; ");
    }
    {
        const auto& entry = catalog::catalog_lookup("neg-sqdist-halfplane");
        const auto probes = catalog::sample_region(entry.region, 1000, kSeed + 4);
        const auto pairs = catalog::sample_region_pairs(entry.region, 1000, kSeed + 5);
        const auto conv = convexity::convexity_check(entry.F, entry.candidate, probes, false);
        const auto mono = convexity::monotonicity_check(entry.F, pairs, false);
        const bool control_ok = !conv.passed && !mono.passed && !conv.failures.empty() &&
                                !mono.failures.empty();
        ok = ok && control_ok;
        notes += std::string("nonconvex control ") +
                 (control_ok ? "fails both with counterexamples" : "UNEXPECTED");
    }
    detail = notes;
    return ok;
}

// --------------------------------------------------------------------------
// 5. Chord inequality wherever convexity passed.

bool criterion5(std::string& detail) {
    bool ok = true;
    std::string notes;
    std::vector<double> mu(21);
    for (int i = 0; i <= 20; ++i) mu[i] = i / 20.0;
    for (const auto& entry : catalog::entries()) {
        const auto probes = catalog::sample_region(entry.region, 500, kSeed + 6);
        if (!convexity::convexity_check(entry.F, entry.candidate, probes, false).passed) continue;
        const auto pairs = catalog::sample_region_pairs(entry.region, 1000, kSeed + 7);
        convexity::SecantCheckOptions opts;
        opts.tolerance =
            entry.manifold.kind == geom::ManifoldKind::PoincareHalfPlane ? 1e-6 : 1e-8;
        opts.endpoint_tolerance = 1e-10;
        const auto secant = convexity::secant_check(entry.F, pairs, mu, opts);
        ok = ok && secant.passed;
        notes += entry.id + (secant.passed ? " ok; " : " FAILED; ");
    }
    detail = notes;
    return ok;
}

// --------------------------------------------------------------------------
// 6. Relation suites: theorem implications on convex entries, cone
//    inclusions everywhere.

bool criterion6(std::string& detail) {
    bool ok = true;
    std::string notes;
    for (const auto& entry : catalog::entries()) {
        const auto candidates = catalog::candidate_grid(entry.region, 200);
        const auto q_samples = catalog::sample_region(entry.region, 10000, kSeed + 8);
        const auto report =
            vvi::relation_suite(entry.F, candidates, q_samples, {}, {}, kWorkers);
        const bool convex_expected = entry.status == catalog::ConvexityStatus::Convex ||
                                     entry.status == catalog::ConvexityStatus::StrictlyConvex;
        if (convex_expected && !report.convex_established) {
            ok = false;
            notes += entry.id + " convexity not established; ";
            continue;
        }
        if (!report.summary.passed) {
            ok = false;
            notes += entry.id + " has " + std::to_string(report.summary.failures.size()) +
                     " implication violations; ";
            continue;
        }
        notes += entry.id + (report.convex_established ? " full; " : " cone-only; ");
    }
    detail = notes;
    return ok;
}

// --------------------------------------------------------------------------
// 7. Pareto-segment sanity for the shifted quadratics.

bool criterion7(std::string& detail) {
    const auto& entry = catalog::catalog_lookup("euclid-quad2");
    const auto q_samples = catalog::sample_region(entry.region, 10000, kSeed + 9);

    // Segment grid through the two minimizers, one grid step past each end.
    const double spacing = 0.1;
    std::vector<Point> candidates;
    for (int i = -10; i <= 20; ++i)
        candidates.push_back(geom::make_point(entry.manifold, {i * spacing, 0.0}));

    bool ok = true;
    std::size_t disagreements = 0;
    for (const auto& candidate : candidates) {
        const auto verdict = vvi::efficiency_check(entry.F, candidate, q_samples, false);

        // Independent brute-force dominance oracle over the same samples.
        const auto fc = entry.F.values(candidate);
        bool dominated = false;
        for (const auto& q : q_samples) {
            const auto fq = entry.F.values(q);
            bool leq_all = true, strictly_less = false;
            for (std::size_t i = 0; i < fc.size(); ++i) {
                if (fq[i] > fc[i] + 1e-8) leq_all = false;
                if (fq[i] < fc[i] - 1e-8) strictly_less = true;
            }
            if (leq_all && strictly_less) {
                dominated = true;
                break;
            }
        }
        if (verdict.passed() != !dominated) ++disagreements;

        const double x = candidate.coords[0];
        if (x >= 0.0 && x <= 1.0 && !verdict.passed()) ok = false;           // no fail inside
        if ((x < -spacing - 1e-12 || x > 1.0 + spacing + 1e-12) && verdict.passed())
            ok = false;  // no pass outside (inflated by one grid step)
    }
    ok = ok && disagreements == 0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "31 segment candidates, oracle disagreements %zu, pass set within "
                  "[-%.1f, 1+%.1f]",
                  disagreements, spacing, spacing);
    detail = buf;
    return ok;
}

// --------------------------------------------------------------------------
// 8. Byte-identical reports across repeats and worker counts.

bool criterion8(std::string& detail) {
    const std::string config_text =
        R"({"catalog_id":"euclid-quad2",)"
        R"("suites":["geometry","convexity","monotonicity","stampacchia","minty","relations"],)"
        R"("seed":20250617,)"
        R"("budgets":{"q_samples":1500,"pairs":200,"directions":100,"grid":512,"candidates":50}})";
    auto config = runner::parse_config(config_text);
    const std::string a = runner::report_json(runner::run(config));
    const std::string b = runner::report_json(runner::run(config));
    config.workers = 4;
    const std::string c = runner::report_json(runner::run(config));
    const std::string d = runner::report_json(runner::run(config));
    const bool ok = a == b && a == c && c == d && !a.empty();
    detail = ok ? "4 runs (workers 1,1,4,4) byte-identical, " + std::to_string(a.size()) +
                      " bytes"
                : "reports differ";
    return ok;
}

} // namespace

int main() {
    std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(kSeed));
    timed(1, "half-plane geometry closed forms and ODE oracles", criterion1);
    timed(2, "kinked-pair tables and Stampacchia solution at (0,1)", criterion2);
    timed(3, "mean value witnesses across the catalog", criterion3);
    timed(4, "convexity/monotonicity agreement on controls", criterion4);
    timed(5, "chord inequality wherever convexity passed", criterion5);
    timed(6, "VVI/VOP relation suites", criterion6);
    timed(7, "Pareto segment sanity for shifted quadratics", criterion7);
    timed(8, "deterministic reports across workers", criterion8);
    if (failures == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
