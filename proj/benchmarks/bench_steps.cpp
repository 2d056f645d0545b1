#include <benchmark/benchmark.h>

#include "swsgd/optimizers.hpp"

using namespace swsgd;

namespace {

void BM_sgd_step_quadratic(benchmark::State& state) {
    QuadraticProblem q(Vector::Zero(2), 1.0);
    RngStream rng({42, 0});
    Vector th = Vector::Constant(2, 5.0);
    std::int64_t k = 0;
    for (auto _ : state) {
        th = sgd_step(q, Pathwise{}, th, k++ % 10000, {0.05, 0.501}, rng);
        benchmark::DoNotOptimize(th);
    }
}
BENCHMARK(BM_sgd_step_quadratic);

void BM_sgd_step_quartic(benchmark::State& state) {
    SkewedQuartic p(static_cast<Eigen::Index>(state.range(0)), 1.0);
    RngStream rng({42, 0});
    Vector th = Vector::Constant(p.dimension(), 1.0);
    std::int64_t k = 0;
    for (auto _ : state) {
        th = sgd_step(p, Pathwise{}, th, k++ % 10000, {0.01, 0.501}, rng);
        benchmark::DoNotOptimize(th);
    }
}
BENCHMARK(BM_sgd_step_quartic)->Arg(3)->Arg(10)->Arg(30);

void BM_swsgd_step_quartic(benchmark::State& state) {
    SkewedQuartic p(3, 1.0);
    RngStream rng({42, 0});
    WindowBuffer buf(2);
    Vector th = Vector::Constant(3, 1.0);
    std::int64_t k = 0;
    for (auto _ : state) {
        th = swsgd_step(p, Pathwise{}, buf, th, k++ % 10000, {0.01, 0.501}, rng);
        benchmark::DoNotOptimize(th);
    }
}
BENCHMARK(BM_swsgd_step_quartic);

void BM_score_step_simple(benchmark::State& state) {
    SimpleExample1D p(50.0);
    RngStream rng({42, 0});
    Vector th = Vector::Constant(1, 7.0);
    std::int64_t k = 0;
    for (auto _ : state) {
        th = sgd_step(p, ScoreFunctionUnbiased{}, th, k++ % 10000,
                      {0.05, 0.501}, rng);
        if (!th.allFinite()) th = Vector::Constant(1, 7.0);
        benchmark::DoNotOptimize(th);
    }
}
BENCHMARK(BM_score_step_simple);

}  // namespace
