#include <benchmark/benchmark.h>

#include <vector>

#include "gsr/admm.hpp"
#include "gsr/basis.hpp"
#include "gsr/benchmarks.hpp"
#include "gsr/eval.hpp"
#include "gsr/gp.hpp"
#include "gsr/rng.hpp"

namespace {

using namespace gsr;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (double& v : m.data()) {
        v = rng.uniform(-1.0, 1.0);
    }
    return m;
}

void BM_SolveAdmm(benchmark::State& state) {
    const Matrix a = random_matrix(20, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_admm(a, AdmmConfig{}));
    }
}
BENCHMARK(BM_SolveAdmm)->Arg(4)->Arg(8)->Arg(16);

void BM_FitRelation(benchmark::State& state) {
    const Matrix a = random_matrix(20, 16, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_relation(a, 15, AdmmConfig{}));
    }
}
BENCHMARK(BM_FitRelation);

void BM_BuildDesign(benchmark::State& state) {
    const Benchmark& b = find_benchmark("Nguyen-10");
    const Dataset data = sample_dataset(b, Role::Train, 0);
    const MappingTable tx = b.table_x();
    const MappingTable ty = b.table_y();
    Rng rng(3);
    std::vector<PhiMatrix> phis;
    for (int i = 0; i < 15; ++i) {
        phis.push_back(random_phi(tx, rng));
    }
    const std::vector<PsiMatrix> psis{random_psi(ty, rng, false)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_design(data, phis, psis, tx, ty));
    }
}
BENCHMARK(BM_BuildDesign);

void BM_Generation(benchmark::State& state) {
    const Benchmark& b = find_benchmark("Nguyen-5");
    GpConfig cfg;
    cfg.max_generations = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_benchmark(b, cfg));
    }
}
BENCHMARK(BM_Generation)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
