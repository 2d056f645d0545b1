#include <benchmark/benchmark.h>

#include "swsgd/rng.hpp"

namespace {

void BM_next_u64(benchmark::State& state) {
    swsgd::RngStream rng({42, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.next_u64());
    }
}
BENCHMARK(BM_next_u64);

void BM_next_normal(benchmark::State& state) {
    swsgd::RngStream rng({42, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.next_normal());
    }
}
BENCHMARK(BM_next_normal);

void BM_derive_stream(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) {
        swsgd::RngStream rng({42, i++});
        benchmark::DoNotOptimize(rng.next_u64());
    }
}
BENCHMARK(BM_derive_stream);

}  // namespace
