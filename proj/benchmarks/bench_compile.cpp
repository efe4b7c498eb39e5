#include <benchmark/benchmark.h>

#include "machines.hpp"
#include "tmnet/serialize.hpp"
#include "tmnet/ss.hpp"
#include "tmnet/wcm.hpp"

namespace {

void BM_CompileWcm(benchmark::State& state) {
  const tmnet::TuringMachine m = tmnet::bench::bp_turing();
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmnet::compile_wcm(m, steps));
  }
}
BENCHMARK(BM_CompileWcm)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Compile4(benchmark::State& state) {
  const tmnet::StackMachine m = tmnet::bench::bp_stack();
  for (auto _ : state) benchmark::DoNotOptimize(tmnet::compile4(m));
}
BENCHMARK(BM_Compile4)->Unit(benchmark::kMicrosecond);

void BM_Compile1(benchmark::State& state) {
  const tmnet::StackMachine m = tmnet::bench::bp_stack();
  for (auto _ : state) benchmark::DoNotOptimize(tmnet::compile1(m));
}
BENCHMARK(BM_Compile1)->Unit(benchmark::kMicrosecond);

void BM_SerializeWcm(benchmark::State& state) {
  const tmnet::TuringMachine m = tmnet::bench::bp_turing();
  const tmnet::WeightDocument doc{"wcm21", m.fingerprint(), {},
                                  tmnet::compile_wcm(m, 100).step_net};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmnet::deserialize(tmnet::serialize(doc)));
  }
}
BENCHMARK(BM_SerializeWcm)->Unit(benchmark::kMillisecond);

}  // namespace
