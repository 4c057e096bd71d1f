#include <benchmark/benchmark.h>

#include "hvvi/catalog.hpp"
#include "hvvi/geometry.hpp"

namespace {

using namespace hvvi;
using geom::Point;
using geom::Tangent;

std::vector<Point> sample_points(std::size_t n) {
    const catalog::Region ball{geom::make_point(geom::Manifold::half_plane(), {0.0, 1.0}), 3.0};
    return catalog::sample_region(ball, n, 1234);
}

void BM_HalfPlaneExp(benchmark::State& state) {
    const auto points = sample_points(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const Point& p = points[i % 512];
        const Point& q = points[512 + i % 512];
        benchmark::DoNotOptimize(geom::exp_map(p, geom::log_map(p, q)));
        ++i;
    }
}
BENCHMARK(BM_HalfPlaneExp);

void BM_HalfPlaneDistance(benchmark::State& state) {
    const auto points = sample_points(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(geom::distance(points[i % 512], points[512 + i % 512]));
        ++i;
    }
}
BENCHMARK(BM_HalfPlaneDistance);

void BM_ParallelTransport(benchmark::State& state) {
    const auto points = sample_points(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const Point& p = points[i % 512];
        const Point& q = points[512 + i % 512];
        const Tangent u = geom::make_tangent(p, {0.3, -1.1});
        benchmark::DoNotOptimize(geom::parallel_transport(u, p, q));
        ++i;
    }
}
BENCHMARK(BM_ParallelTransport);

void BM_SplitResiduals(benchmark::State& state) {
    const auto points = sample_points(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto split = geom::split_geodesic(points[i % 512], points[512 + i % 512], 0.375);
        benchmark::DoNotOptimize(geom::split_residuals(split));
        ++i;
    }
}
BENCHMARK(BM_SplitResiduals);

} // namespace

BENCHMARK_MAIN();
