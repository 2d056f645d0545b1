#include <benchmark/benchmark.h>

#include "swsgd/fabian.hpp"

using namespace swsgd;

namespace {

FabianInputs make_inputs(Eigen::Index p) {
    RngStream rng({7, static_cast<std::uint64_t>(p)});
    Matrix g(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) g(i, j) = rng.next_normal();
    }
    FabianInputs in;
    in.gamma = g.transpose() * g + Matrix::Identity(p, p);
    in.phi = -0.5 * Matrix::Identity(p, p);
    in.c = g * g.transpose() + 0.1 * Matrix::Identity(p, p);
    in.t = Vector::Zero(p);
    in.alpha = 0.501;
    return in;
}

void BM_asymptotic_sigma(benchmark::State& state) {
    const FabianInputs in = make_inputs(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(asymptotic_sigma(in));
    }
}
BENCHMARK(BM_asymptotic_sigma)->Arg(2)->Arg(5)->Arg(20);

void BM_estimate_c(benchmark::State& state) {
    QuadraticProblem q(Vector::Zero(2), 4.0);
    RngStream rng({42, 0});
    const Vector th = Vector::Constant(2, 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_c(q, Pathwise{}, th, state.range(0), rng));
    }
}
BENCHMARK(BM_estimate_c)->Arg(1000)->Arg(10000);

}  // namespace
