#include "tmnet/cli/verify.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include <fmt/format.h>

#include "tmnet/cli/format.hpp"
#include "tmnet/error.hpp"

namespace tmnet::cli {

namespace {

// Trace lines followed by the outcome.
using Rendered = std::vector<std::string>;

std::optional<Divergence> compare(const Rendered& want, const Rendered& got) {
  const std::size_t n = std::min(want.size(), got.size());
  for (std::size_t i = 0; i < std::max(want.size(), got.size()); ++i) {
    const std::string w = i < want.size() ? want[i] : "<end>";
    const std::string g = i < got.size() ? got[i] : "<end>";
    if (w != g) {
      return Divergence{"", "", static_cast<int>(std::min(i, n)), w, g};
    }
  }
  return std::nullopt;
}

// Network runs that throw are replayed with growing budgets to find the
// first step that trips the error.
std::optional<Divergence> first_failure(
    const std::function<void(int)>& run, int max_steps, const Error& error) {
  int step = max_steps;
  for (int t = 1; t <= max_steps; ++t) {
    try {
      run(t);
    } catch (const Error&) {
      step = t - 1;
      break;
    }
  }
  return Divergence{"", "", step, "network step",
                    fmt::format("error: {}", error.what())};
}

}  // namespace

std::optional<Divergence> check_wcm(const WcmNetwork& net,
                                    std::string_view tape, int max_steps) {
  const TuringMachine& m = net.machine;
  const std::vector<int> cells = m.tape_from_string(tape);
  Rendered want;
  const Trace oracle = tm_run(m, cells, max_steps);
  for (const auto& c : oracle.configs) want.push_back(trace_line(m, c));
  want.push_back(describe(m, oracle.outcome));

  std::optional<Divergence> d;
  try {
    const WcmRun run = simulate(net, cells, max_steps);
    Rendered got;
    for (const auto& c : run.trace.configs) got.push_back(trace_line(m, c));
    got.push_back(describe(m, run.trace.outcome));
    d = compare(want, got);
  } catch (const Error& e) {
    d = first_failure([&](int t) { simulate(net, cells, t); }, max_steps, e);
  }
  if (d) d->input = std::string(tape);
  return d;
}

std::optional<Divergence> check_ss(const SsNetwork& net,
                                   const StackMachine& source,
                                   std::string_view input, int max_steps) {
  const StackConfiguration c0 = encode_input_to_stacks(source, input);
  Rendered want;
  const StackTrace oracle = sm_run(source, c0, max_steps);
  for (const auto& c : oracle.configs) want.push_back(trace_line(source, c));
  want.push_back(describe(source, oracle.outcome));

  std::optional<Divergence> d;
  try {
    const StackTrace run = simulate(net, c0, max_steps);
    Rendered got;
    for (const auto& c : run.configs) got.push_back(trace_line(net.machine, c));
    got.push_back(describe(source, run.outcome));
    d = compare(want, got);
  } catch (const Error& e) {
    d = first_failure([&](int t) { simulate(net, c0, t); }, max_steps, e);
  }
  if (d) d->input = std::string(input);
  return d;
}

int default_ss_steps(std::string_view input) {
  return std::max(4 * static_cast<int>(input.size()), 4);
}

}  // namespace tmnet::cli
