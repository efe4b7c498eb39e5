#include <benchmark/benchmark.h>

#include <string>

#include "machines.hpp"
#include "tmnet/cantor.hpp"
#include "tmnet/ss.hpp"
#include "tmnet/wcm.hpp"

namespace {

// Balanced input of n nested pairs.
std::string nested(int n) {
  return std::string(n, '(') + std::string(n, ')');
}

void BM_WcmSimulate(benchmark::State& state) {
  const tmnet::TuringMachine m = tmnet::bench::bp_turing();
  const tmnet::WcmNetwork net = tmnet::compile_wcm(m, 1000);
  const auto tape =
      m.tape_from_string("B" + nested(static_cast<int>(state.range(0))) + "E");
  int steps = 0;
  for (auto _ : state) {
    const tmnet::WcmRun run = tmnet::simulate(net, tape, 1000);
    steps = static_cast<int>(run.trace.configs.size()) - 1;
    benchmark::DoNotOptimize(run.answer);
  }
  state.counters["steps"] = steps;
  state.counters["steps/s"] =
      benchmark::Counter(steps, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_WcmSimulate)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TmRun(benchmark::State& state) {
  const tmnet::TuringMachine m = tmnet::bench::bp_turing();
  const auto tape =
      m.tape_from_string("B" + nested(static_cast<int>(state.range(0))) + "E");
  for (auto _ : state) benchmark::DoNotOptimize(tmnet::tm_run(m, tape, 1000));
}
BENCHMARK(BM_TmRun)->Arg(8);

void BM_SsSimulate(benchmark::State& state) {
  const tmnet::StackMachine m = tmnet::bench::bp_stack();
  const tmnet::SsNetwork net =
      state.range(0) == 4 ? tmnet::compile4(m) : tmnet::compile1(m);
  const auto c0 = tmnet::encode_input_to_stacks(m, nested(4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmnet::simulate(net, c0, 40));
  }
}
BENCHMARK(BM_SsSimulate)->Arg(4)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_PrecisionProbe(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmnet::precision_probe(40, 15));
  }
}
BENCHMARK(BM_PrecisionProbe)->Unit(benchmark::kMillisecond);

}  // namespace
