#include <benchmark/benchmark.h>

#include "hofbauer/census.hpp"
#include "hofbauer/conformal.hpp"
#include "hofbauer/lifting.hpp"

using namespace hofbauer;

namespace {

const RayChoice kCheb{2, {Angle(1, 2)}};
const RayChoice kDendrite{2, {Angle(1, 6)}};
const RayChoice kTwoRays{2, {Angle(5, 12), Angle(7, 12)}};

void BM_TowerBuild(benchmark::State& st) {
    const RayChoice& rc = st.range(0) == 1 ? kCheb : kTwoRays;
    const int R = static_cast<int>(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(build_tower(rc, R));
}
BENCHMARK(BM_TowerBuild)->Args({1, 6})->Args({1, 12})->Args({2, 12})->Unit(benchmark::kMicrosecond);

void BM_Census(benchmark::State& st) {
    const int T = static_cast<int>(st.range(0));
    const TowerGraph g = build_tower(kDendrite, 2, T);
    const int D = domains_of_level(g, 2).front();
    for (auto _ : st) benchmark::DoNotOptimize(cutpoint_census(g, 2, D, T));
}
BENCHMARK(BM_Census)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

// Cesàro lift of Brolin samples; time scales with samples times horizon.
void BM_Lift(benchmark::State& st) {
    const TowerGraph g = build_tower(kCheb, 8);
    const auto n = static_cast<std::size_t>(st.range(0));
    const SampleMeasure mu = brolin_samples(g.partition(), 1000, 7, n + 200);
    for (auto _ : st) benchmark::DoNotOptimize(lift_cesaro(mu, g, n, 8));
    st.SetItemsProcessed(static_cast<int64_t>(st.iterations()) * 1000 * st.range(0));
}
BENCHMARK(BM_Lift)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Landing(benchmark::State& st) {
    const PolynomialModel m(2, {0, 1});
    const LandingSolver s(m);
    long k = 1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(s.land(Angle(k, 1023)));
        k = k % 1022 + 1;
    }
}
BENCHMARK(BM_Landing)->Unit(benchmark::kMicrosecond);

void BM_LeadingEigen(benchmark::State& st) {
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const CylinderModel cm = build_cylinder_model(PartitionP1(kCheb), s, static_cast<std::size_t>(st.range(0)));
    const TransferOperator op = build_operator(cm, 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(leading_eigen(op));
}
BENCHMARK(BM_LeadingEigen)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
