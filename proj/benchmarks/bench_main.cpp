#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "eadmm/backbones.hpp"
#include "eadmm/engine.hpp"
#include "eadmm/metrics.hpp"
#include "eadmm/random.hpp"
#include "eadmm/uc_problems.hpp"

namespace {

using namespace eadmm;

Population random_objectives(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Population pop(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop[i].f.resize(m);
        for (auto& v : pop[i].f) v = rng.uniform();
        pop[i].g = {0};
        pop[i].eval_id = i;
    }
    return pop;
}

// Points on the unit sphere octant, so every point is mutually non-dominated.
std::vector<ObjectiveVector> sphere_front(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts) {
        double norm = 0.0;
        for (auto& v : p) {
            v = rng.uniform(0.01, 1.0);
            norm += v * v;
        }
        for (auto& v : p) v /= std::sqrt(norm);
    }
    return pts;
}

void BM_NondominatedSort(benchmark::State& state) {
    const auto pop = random_objectives(static_cast<std::size_t>(state.range(0)), 3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(fast_nondominated_sort(pop));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NondominatedSort)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNSquared);

void BM_HypervolumeExact3(benchmark::State& state) {
    const auto pts = sphere_front(static_cast<std::size_t>(state.range(0)), 3, 11);
    const ObjectiveVector ref(3, 1.1);
    for (auto _ : state) benchmark::DoNotOptimize(hypervolume_exact(pts, ref));
}
BENCHMARK(BM_HypervolumeExact3)->Arg(50)->Arg(100)->Arg(200);

void BM_HypervolumeMonteCarlo5(benchmark::State& state) {
    const auto pts = sphere_front(126, 5, 13);
    const ObjectiveVector ref(5, 1.1);
    for (auto _ : state) benchmark::DoNotOptimize(hypervolume_monte_carlo(pts, ref, 100'000));
}
BENCHMARK(BM_HypervolumeMonteCarlo5)->Unit(benchmark::kMillisecond);

void BM_IbeaSelect(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pool = random_objectives(2 * n, 3, 17);
    for (auto _ : state) benchmark::DoNotOptimize(ibea_select(pool, n));
}
BENCHMARK(BM_IbeaSelect)->Arg(52)->Arg(105)->Arg(210)->Unit(benchmark::kMicrosecond);

void BM_Generation(benchmark::State& state) {
    const auto problem = make_problem(parse_problem_name("UC1-DTLZ2-m3"));
    EadmmConfig config;
    config.backbone = static_cast<Backbone>(state.range(0));
    config.max_fe = 1'000'000'000;
    Rng rng(23);
    auto s = initialize(problem, config, rng);
    for (auto _ : state) benchmark::DoNotOptimize(eadmm_generation(s, problem, config, rng));
    state.SetLabel(std::string(to_string(config.backbone)));
}
BENCHMARK(BM_Generation)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
