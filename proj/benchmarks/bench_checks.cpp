#include <benchmark/benchmark.h>

#include "hvvi/catalog.hpp"
#include "hvvi/nonsmooth.hpp"
#include "hvvi/vvi.hpp"

namespace {

using namespace hvvi;

void BM_DiniEstimate(benchmark::State& state) {
    const auto& entry = catalog::catalog_lookup("example-4.1");
    const auto& f = entry.F.components[0];
    const auto p = geom::make_point(geom::Manifold::half_plane(), {0.2, 1.5});
    const auto dirs = nonsmooth::sample_unit_directions(p, 64, 7);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nonsmooth::dini_estimate(f, p, dirs[i % dirs.size()]));
        ++i;
    }
}
BENCHMARK(BM_DiniEstimate);

void BM_StampacchiaPerThousandSamples(benchmark::State& state) {
    const auto& entry = catalog::catalog_lookup("example-4.1");
    const auto q = catalog::sample_region(entry.region, 1000, 99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vvi::stampacchia_check(entry.F, entry.candidate, q));
    }
}
BENCHMARK(BM_StampacchiaPerThousandSamples);

void BM_MintyPerThousandSamples(benchmark::State& state) {
    const auto& entry = catalog::catalog_lookup("example-4.1");
    const auto q = catalog::sample_region(entry.region, 1000, 99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vvi::minty_check(entry.F, entry.candidate, q));
    }
}
BENCHMARK(BM_MintyPerThousandSamples);

void BM_MvtWitness(benchmark::State& state) {
    const auto& entry = catalog::catalog_lookup("sqdist-halfplane");
    const auto pairs = catalog::sample_region_pairs(entry.region, 8, 5);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [p, q] = pairs[i % pairs.size()];
        benchmark::DoNotOptimize(
            nonsmooth::mvt_witness(entry.F.components[0], p, q, state.range(0)));
        ++i;
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MvtWitness)->Range(256, 4096)->Complexity();

void BM_SampleRegion(benchmark::State& state) {
    const auto& entry = catalog::catalog_lookup("example-4.1");
    for (auto _ : state) {
        benchmark::DoNotOptimize(catalog::sample_region(entry.region, state.range(0), 31));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleRegion)->Range(1024, 16384)->Complexity();

} // namespace

BENCHMARK_MAIN();
