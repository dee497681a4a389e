// Microbenchmarks for the hot paths: single steps per family, polynomial
// extraction, stride addition, and a cache replay.
#include <benchmark/benchmark.h>

#include <cstdint>

#include "fsrpc/cachesim.hpp"
#include "fsrpc/counter.hpp"
#include "fsrpc/fsr.hpp"
#include "fsrpc/hybrid.hpp"

namespace {

using fsrpc::CounterSpec;
using fsrpc::FsrFamily;
using fsrpc::FsrSpec;

FsrSpec spec_of(FsrFamily family, unsigned width) {
  switch (family) {
    case FsrFamily::Fibonacci:
      return {FsrFamily::Fibonacci, width, {0, 1, 2, 7}, {}, 0};
    case FsrFamily::Galois:
      return {FsrFamily::Galois, width, {0, 1, 6, 7}, {}, 0};
    case FsrFamily::RingGenerator:
      return {FsrFamily::RingGenerator, width, {}, {{0, 6}, {2, 7}, {3, 3}}, 0};
    case FsrFamily::Mfsr:
      return {FsrFamily::Mfsr, width, {}, {{0, 0}, {1, 5}}, 0};
    case FsrFamily::CellularAutomaton:
      return {FsrFamily::CellularAutomaton, width, {}, {}, 0x93};
  }
  return {};
}

void BM_fsr_step(benchmark::State& state) {
  const FsrSpec spec = spec_of(static_cast<FsrFamily>(state.range(0)), 8);
  std::uint64_t s = 1;
  for (auto _ : state) {
    s = fsrpc::fsr_step(spec, s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_fsr_step)->DenseRange(0, 4)->ArgName("family");

void BM_counter_step(benchmark::State& state) {
  fsrpc::Counter c{CounterSpec(fsrpc::Radix2Spec{32})};
  std::uint64_t s = 0;
  for (auto _ : state) {
    s = c.step_bits(s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_counter_step);

void BM_hybrid_step(benchmark::State& state) {
  fsrpc::HybridSpec spec;
  spec.segments.push_back({fsrpc::Radix2Spec{3}, {}, {}});
  spec.segments.push_back(
      {FsrSpec{FsrFamily::Mfsr, 7, {}, {{0, 0}}, 0}, {}, {}});
  fsrpc::Hybrid pc{spec};
  std::uint64_t s = pc.reset().bits();
  for (auto _ : state) {
    s = pc.step_bits(s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_hybrid_step);

void BM_char_poly(benchmark::State& state) {
  const FsrSpec spec{FsrFamily::Mfsr,
                     static_cast<unsigned>(state.range(0)),
                     {},
                     {{0, 2}},
                     0};
  for (auto _ : state) {
    auto p = fsrpc::char_poly_of(spec);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_char_poly)->Arg(10)->Arg(24)->Arg(48)->ArgName("width");

void BM_offset_add(benchmark::State& state) {
  fsrpc::Counter c{CounterSpec(spec_of(FsrFamily::Galois, 8))};
  const fsrpc::CounterState s{1, 8};
  std::uint64_t k = 0x123456789;
  for (auto _ : state) {
    auto r = c.offset_add(s, k);
    benchmark::DoNotOptimize(r);
    k += 0x9E3779B9;
  }
}
BENCHMARK(BM_offset_add);

void BM_cache_replay(benchmark::State& state) {
  fsrpc::HybridSpec spec;
  spec.segments.push_back(
      {FsrSpec{FsrFamily::Mfsr, 10, {}, {{0, 2}}, 0}, {}, {}});
  fsrpc::Hybrid pc{spec};
  const fsrpc::CacheConfig cfg{8, 16, 1};
  for (auto _ : state) {
    auto r = fsrpc::simulate(pc, cfg, 1016);
    benchmark::DoNotOptimize(r.misses);
  }
}
BENCHMARK(BM_cache_replay);

}  // namespace

BENCHMARK_MAIN();
