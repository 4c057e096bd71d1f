#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hvvi/catalog.hpp"
#include "hvvi/errors.hpp"
#include "hvvi/nonsmooth.hpp"
#include "hvvi/rng.hpp"

using namespace hvvi;
using geom::Manifold;
using geom::Point;
using geom::Tangent;
using nonsmooth::Convexificator;
using nonsmooth::ScalarFunction;

namespace {

const Manifold kPlane = Manifold::euclidean(2);
const Manifold kLine = Manifold::euclidean(1);
const Manifold kHalfPlane = Manifold::half_plane();

Point hp(double x, double y) { return geom::make_point(kHalfPlane, {x, y}); }

ScalarFunction abs_first_coord() {
    return ScalarFunction{
        [](const Point& p) { return std::abs(p.coords[0]); },
        [](const Point& p) {
            Convexificator c;
            c.base = p;
            if (std::abs(p.coords[0]) <= 1e-12) {
                c.generators.push_back(geom::make_tangent(p, {1.0, 0.0}));
                c.generators.push_back(geom::make_tangent(p, {-1.0, 0.0}));
            } else {
                c.generators.push_back(
                    geom::make_tangent(p, {p.coords[0] > 0 ? 1.0 : -1.0, 0.0}));
            }
            return c;
        },
        std::nullopt};
}

ScalarFunction abs_1d() {
    return ScalarFunction{
        [](const Point& p) { return std::abs(p.coords[0]); },
        [](const Point& p) {
            Convexificator c;
            c.base = p;
            if (std::abs(p.coords[0]) <= 1e-12) {
                c.generators.push_back(geom::make_tangent(p, {1.0}));
                c.generators.push_back(geom::make_tangent(p, {-1.0}));
            } else {
                c.generators.push_back(geom::make_tangent(p, {p.coords[0] > 0 ? 1.0 : -1.0}));
            }
            return c;
        },
        std::nullopt};
}

ScalarFunction square_1d() {
    return ScalarFunction{
        [](const Point& p) { return p.coords[0] * p.coords[0]; },
        [](const Point& p) {
            Convexificator c;
            c.base = p;
            c.generators.push_back(geom::make_tangent(p, {2.0 * p.coords[0]}));
            return c;
        },
        std::nullopt};
}

const ScalarFunction& kinked_component(int which) {
    return catalog::catalog_lookup("example-4.1").F.components[which - 1];
}

} // namespace

TEST_CASE("dini estimate of |x1| at the kink") {
    const Point origin = geom::make_point(kPlane, {0, 0});
    const auto estimate =
        nonsmooth::dini_estimate(abs_first_coord(), origin, geom::make_tangent(origin, {1, 0}));
    CHECK(estimate.lower == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(estimate.upper == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(estimate.lower <= estimate.upper);
    CHECK(estimate.steps_used == 20);
}

TEST_CASE("dini estimates reproduce the vertical-direction derivatives") {
    // Along w = (0, y) at p = (0, 1): component 1 has derivative
    // y ln y + y = 1, component 2 has derivative 2 y^2 = 2.
    const Point p = hp(0, 1);
    const Tangent w = geom::make_tangent(p, {0, 1});
    const auto d1 = nonsmooth::dini_estimate(kinked_component(1), p, w);
    CHECK(d1.lower == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(d1.upper == doctest::Approx(1.0).epsilon(1e-5));
    const auto d2 = nonsmooth::dini_estimate(kinked_component(2), p, w);
    CHECK(d2.lower == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(d2.upper == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("dini estimate schedule contracts") {
    const Point p = hp(0, 1);
    const Tangent v = geom::make_tangent(p, {0, 1});
    nonsmooth::DiniSchedule too_deep;
    too_deep.t0 = 1e-4;
    too_deep.steps = 40;
    too_deep.tail = 6;
    CHECK_THROWS_AS(nonsmooth::dini_estimate(kinked_component(1), p, v, too_deep),
                    ContractViolation);

    ScalarFunction bad{[](const Point& q) { return q.coords[0] > 0 ? std::nan("") : 0.0; },
                       nullptr, std::nullopt};
    const Point origin = geom::make_point(kPlane, {0, 0});
    CHECK_THROWS_WITH_AS(
        nonsmooth::dini_estimate(bad, origin, geom::make_tangent(origin, {1, 0})),
        doctest::Contains("t="), ProbeFailure);
}

TEST_CASE("dini positive homogeneity") {
    const Point p = hp(0.3, 1.7);
    RandomStream stream(11, "homogeneity");
    const auto dirs = nonsmooth::sample_unit_directions(p, 50, 17);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const double c = 0.25 + 3.0 * stream.uniform(i, 0);
        const auto base = nonsmooth::dini_estimate(kinked_component(2), p, dirs[i]);
        const auto scaled =
            nonsmooth::dini_estimate(kinked_component(2), p, geom::scale(dirs[i], c));
        CHECK(scaled.lower == doctest::Approx(c * base.lower).epsilon(1e-4));
        CHECK(scaled.upper == doctest::Approx(c * base.upper).epsilon(1e-4));
    }
}

TEST_CASE("dini matches analytic directional derivatives of smooth functions") {
    // f(x, y) = x^2 + x y; directional derivative (2x + y) v1 + x v2. Unit
    // directions keep the quotient curvature (and with it the truncation
    // error of the default schedule) well below the 1e-6 target.
    ScalarFunction f{[](const Point& p) {
                         return p.coords[0] * p.coords[0] + p.coords[0] * p.coords[1];
                     },
                     nullptr, std::nullopt};
    RandomStream stream(3, "smooth-dini");
    for (int i = 0; i < 100; ++i) {
        const Point p = geom::make_point(kPlane, {stream.normal(i, 0), stream.normal(i, 1)});
        const auto dirs = nonsmooth::sample_unit_directions(p, 1, stream.bits(i, 9));
        const Tangent& v = dirs[0];
        const double expected = (2.0 * p.coords[0] + p.coords[1]) * v.coords[0] +
                                p.coords[0] * v.coords[1];
        const auto estimate = nonsmooth::dini_estimate(f, p, v);
        const double scale = 1.0 + std::abs(expected);
        CHECK(std::abs(estimate.lower - expected) / scale < 1e-6);
        CHECK(std::abs(estimate.upper - expected) / scale < 1e-6);
    }
}

TEST_CASE("upper/lower checks accept |x1| with the two-sided set at the kink") {
    const Point origin = geom::make_point(kPlane, {0, 0});
    const ScalarFunction f = abs_first_coord();
    const Convexificator cvx = f.convexificator_oracle(origin);
    const auto dirs = nonsmooth::sample_unit_directions(origin, 500, 42);
    CHECK(nonsmooth::upper_convexificator_check(f, origin, cvx, dirs).passed);
    CHECK(nonsmooth::lower_convexificator_check(f, origin, cvx, dirs).passed);
}

TEST_CASE("axis tables pass both checks at (0,1)") {
    const Point p = hp(0, 1);
    for (int which : {1, 2}) {
        const ScalarFunction& f = kinked_component(which);
        const Convexificator cvx = f.convexificator_oracle(p);
        REQUIRE(cvx.generators.size() == 2);
        const auto dirs = nonsmooth::sample_unit_directions(p, 1000, 424242);
        const auto upper = nonsmooth::upper_convexificator_check(f, p, cvx, dirs);
        const auto lower = nonsmooth::lower_convexificator_check(f, p, cvx, dirs);
        CHECK(upper.passed);
        CHECK(lower.passed);
        CHECK(upper.worst_margin > -1e-4);
    }
}

TEST_CASE("wrong branch fails the upper check in direction (1,0)") {
    const Point p = hp(2, 1);
    const ScalarFunction& f = kinked_component(1);
    Convexificator wrong;
    wrong.base = p;
    wrong.generators.push_back(geom::make_tangent(p, {-1.0, 1.0}));

    std::vector<Tangent> dirs = {geom::make_tangent(p, {1, 0}), geom::make_tangent(p, {-1, 0})};
    const auto dirs_random = nonsmooth::sample_unit_directions(p, 200, 5);
    dirs.insert(dirs.end(), dirs_random.begin(), dirs_random.end());

    const auto report = nonsmooth::upper_convexificator_check(f, p, wrong, dirs);
    CHECK_FALSE(report.passed);
    CHECK(report.sample_margins[0] == doctest::Approx(-2.0).epsilon(1e-4));
}

TEST_CASE("lower check rejects a translated singleton set") {
    const Point p = hp(0, 1);
    const ScalarFunction& f = kinked_component(2);
    Convexificator off;
    off.base = p;
    off.generators.push_back(geom::make_tangent(p, {5.0, 2.0}));

    std::vector<Tangent> dirs = {geom::make_tangent(p, {1, 0}), geom::make_tangent(p, {-1, 0})};
    const auto report = nonsmooth::lower_convexificator_check(f, p, off, dirs);
    CHECK_FALSE(report.passed);
    CHECK(report.sample_margins[0] == doctest::Approx(-4.0).epsilon(1e-4));  // direction (1,0)
    CHECK(report.sample_margins[1] == doctest::Approx(6.0).epsilon(1e-4));   // direction (-1,0)
    CHECK(report.worst_index == 0);
}

TEST_CASE("mvt witness for x^2 on the line") {
    const Point p = geom::make_point(kLine, {0.0});
    const Point q = geom::make_point(kLine, {1.0});
    const auto witness = nonsmooth::mvt_witness(square_1d(), p, q, 4096);
    CHECK(witness.residual < 1e-10);
    CHECK(witness.t_star == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(witness.xi.coords[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mvt witness for |x| sits at the kink with hull coefficients (1/2, 1/2)") {
    const Point p = geom::make_point(kLine, {-1.0});
    const Point q = geom::make_point(kLine, {1.0});
    const auto witness = nonsmooth::mvt_witness(abs_1d(), p, q, 4096);
    CHECK(witness.residual < 1e-10);
    CHECK(witness.w.coords[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(witness.xi.coords[0] == doctest::Approx(0.0).epsilon(1e-9));
    REQUIRE(witness.coefficients.size() == 2);
    CHECK(witness.coefficients[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(witness.coefficients[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("mvt witness along the vertical geodesic of the kinked pair") {
    const Point p = hp(0, 1);
    const Point q = hp(0, std::exp(1.0));
    const auto witness = nonsmooth::mvt_witness(kinked_component(1), p, q, 4096);
    CHECK(witness.residual < 1e-6);
    CHECK(witness.w.coords[1] > 1.0);
    CHECK(witness.w.coords[1] < std::exp(1.0));
}

TEST_CASE("mvt witness hull data is a convex combination") {
    const Point p = hp(-0.8, 2.0);
    const Point q = hp(1.1, 0.7);
    const auto witness = nonsmooth::mvt_witness(kinked_component(2), p, q, 2048);
    double sum = 0.0;
    for (double c : witness.coefficients) {
        CHECK(c >= 0.0);
        sum += c;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mvt residual is nonincreasing under grid refinement") {
    const catalog::Region ball{hp(0, std::exp(2.0)), 2.0};
    const auto points = catalog::sample_region(ball, 40, 654ull);
    for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
        if (points[i].coords == points[i + 1].coords) continue;
        for (int which : {1, 2}) {
            const auto coarse =
                nonsmooth::mvt_witness(kinked_component(which), points[i], points[i + 1], 100);
            const auto fine =
                nonsmooth::mvt_witness(kinked_component(which), points[i], points[i + 1], 10000);
            CHECK(fine.residual <= coarse.residual + 1e-12);
        }
    }
}

TEST_CASE("mvt witness contracts") {
    const Point p = geom::make_point(kLine, {1.0});
    CHECK_THROWS_AS(nonsmooth::mvt_witness(square_1d(), p, p, 128), ContractViolation);
    const Point q = geom::make_point(kLine, {2.0});
    CHECK_THROWS_AS(nonsmooth::mvt_witness(square_1d(), p, q, 0), ContractViolation);
}

TEST_CASE("unit direction sampling is metric-normalized and deterministic") {
    const Point p = hp(0.4, 3.0);
    const auto a = nonsmooth::sample_unit_directions(p, 200, 99);
    const auto b = nonsmooth::sample_unit_directions(p, 200, 99);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(geom::metric_norm(a[i]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a[i].coords == b[i].coords);
    }
}
