#include "tmnet/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tmnet/cantor.hpp"
#include "tmnet/cli/corpus.hpp"
#include "tmnet/cli/format.hpp"
#include "tmnet/cli/machine_file.hpp"
#include "tmnet/cli/verify.hpp"
#include "tmnet/error.hpp"
#include "tmnet/serialize.hpp"
#include "tmnet/ss.hpp"
#include "tmnet/wcm.hpp"

namespace tmnet::cli {

namespace {

constexpr int kDefaultWcmSteps = 100;
constexpr int kRandomMachineSteps = 30;

struct Options {
  std::string machine;
  std::string arch = "wcm21";
  std::optional<int> steps;
  std::string out;
  std::string input;
  bool trace = false;
  std::string net;
  std::string inputs;
  std::optional<int> random;
  std::uint64_t seed = 1;
  int max_len = 8;
  std::optional<int> exhaustive;
  std::optional<int> random_machines;
  int base = 40;
  int pops = 15;
  int stacks = 1000;
};

bool is_wcm(const std::string& arch) { return arch == "wcm21"; }

SsVariant variant_of(const std::string& arch) {
  return arch == "ss95-1" ? SsVariant::kOneLayer : SsVariant::kFourLayer;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("cannot write '{}'", path));
  }
}

// The machine file, checked against the requested architecture.
MachineFile load_for(const Options& o) {
  MachineFile file = load_machine(o.machine);
  const bool turing = file.kind == MachineFile::Kind::kTuring;
  if (turing != is_wcm(o.arch)) {
    throw Error(ErrorCode::kMachineMismatch,
                fmt::format("arch {} needs a {} machine, but '{}' describes a "
                            "{} machine",
                            o.arch, is_wcm(o.arch) ? "Turing" : "stack",
                            o.machine, turing ? "Turing" : "stack"));
  }
  return file;
}

WeightDocument load_document(const Options& o, const std::string& hash) {
  WeightDocument doc = deserialize(read_file(o.net));
  if (doc.arch != o.arch) {
    throw Error(ErrorCode::kMachineMismatch,
                fmt::format("'{}' holds a {} network, not {}", o.net, doc.arch,
                            o.arch));
  }
  if (doc.machine_hash != hash) {
    throw Error(ErrorCode::kMachineMismatch,
                fmt::format("'{}' was compiled from a different machine",
                            o.net));
  }
  return doc;
}

WcmNetwork wcm_network(const TuringMachine& m, const Options& o) {
  if (o.net.empty()) return compile_wcm(m, o.steps.value_or(kDefaultWcmSteps));
  WeightDocument doc = load_document(o, m.fingerprint());
  auto it = doc.meta.find("max_steps");
  if (it == doc.meta.end()) {
    throw Error(ErrorCode::kMalformedDocument, "document lacks max_steps");
  }
  return wcm_from_network(m, std::stoi(it->second), std::move(doc.network));
}

SsNetwork ss_network(const StackMachine& m, const Options& o) {
  const SsVariant v = variant_of(o.arch);
  if (o.net.empty()) {
    return v == SsVariant::kFourLayer ? compile4(m) : compile1(m);
  }
  WeightDocument doc = load_document(o, m.fingerprint());
  return ss_from_network(m, v, std::move(doc.network));
}

int cmd_compile(const Options& o, std::ostream& out) {
  const MachineFile file = load_for(o);
  WeightDocument doc;
  doc.arch = o.arch;
  if (is_wcm(o.arch)) {
    const WcmNetwork net = wcm_network(*file.turing, o);
    const WcmCensus c = net.census();
    doc.machine_hash = file.turing->fingerprint();
    doc.meta["max_steps"] = std::to_string(net.layout.max_steps);
    doc.network = net.step_net;
    fmt::print(out, "arch\twcm21\n");
    fmt::print(out, "max steps\t{}\n", net.layout.max_steps);
    fmt::print(out, "width\t{}\n", c.width);
    fmt::print(out, "detectors\t{}\n", c.detectors);
    fmt::print(out, "transition layers\t{}\n", c.transition_layers);
    fmt::print(out, "preprocess layers\t{}\n", c.preprocess_layers);
    fmt::print(out, "full adders\t{}\n", c.full_adders);
    fmt::print(out, "project-down layers\t{}\n", c.project_down_layers);
    fmt::print(out, "self-attention layers\t{}\n", c.self_attention);
    fmt::print(out, "cross-attention layers\t{}\n", c.cross_attention);
    fmt::print(out, "sharpen layers\t{}\n", c.sharpen_layers);
    fmt::print(out, "assembly feedforward layers\t{}\n", c.assembly_layers);
    fmt::print(out, "total layers\t{}\n", c.total_layers);
  } else {
    const SsNetwork net = ss_network(*file.stack, o);
    doc.machine_hash = file.stack->fingerprint();
    doc.meta["base"] = std::to_string(net.codec.base());
    doc.network = net.step_net;
    fmt::print(out, "arch\t{}\n", o.arch);
    fmt::print(out, "base\t{}\n", net.codec.base());
    fmt::print(out, "states\t{}\n", net.machine.num_states());
    fmt::print(out, "width\t{}\n", net.step_net.input_width());
    fmt::print(out, "detector width\t{}\n", net.detector_width());
    fmt::print(out, "layers per step\t{}\n", net.layers_per_step());
    fmt::print(out, "routing residual\t{:.3g}\n", net.routing.residual);
  }
  write_file(o.out, serialize(doc));
  fmt::print(out, "wrote\t{}\n", o.out);
  return 0;
}

template <typename Machine, typename TraceT>
int report_run(const Machine& m, const TraceT& trace, bool show,
               std::ostream& out, std::ostream& err) {
  if (show) {
    for (const auto& c : trace.configs) out << trace_line(m, c) << '\n';
  }
  if (trace.outcome.kind != Outcome::Kind::kHalted) {
    fmt::print(err, "{}\n", describe(m, trace.outcome));
    return 1;
  }
  out << m.states()[trace.outcome.state] << '\n';
  return 0;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const MachineFile file = load_for(o);
  if (is_wcm(o.arch)) {
    const TuringMachine& m = *file.turing;
    const WcmNetwork net = wcm_network(m, o);
    const auto tape = m.tape_from_string(o.input);
    const int steps = o.steps.value_or(net.layout.max_steps);
    return report_run(m, simulate(net, tape, steps).trace, o.trace, out, err);
  }
  const StackMachine& m = *file.stack;
  const SsNetwork net = ss_network(m, o);
  const StackConfiguration c0 = encode_input_to_stacks(m, o.input);
  const int steps = o.steps.value_or(default_ss_steps(o.input));
  StackTrace trace = simulate(net, c0, steps);
  return report_run(net.machine, trace, o.trace, out, err);
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const MachineFile file = load_machine(o.machine);
  if (file.kind == MachineFile::Kind::kTuring) {
    const TuringMachine& m = *file.turing;
    const Trace t = tm_run(m, m.tape_from_string(o.input),
                           o.steps.value_or(kDefaultWcmSteps));
    return report_run(m, t, true, out, err);
  }
  const StackMachine& m = *file.stack;
  const StackTrace t = sm_run(m, encode_input_to_stacks(m, o.input),
                              o.steps.value_or(default_ss_steps(o.input)));
  return report_run(m, t, true, out, err);
}

struct Case {
  std::string id;
  std::string input;
};

std::vector<Case> corpus(const Options& o, std::string_view alphabet,
                         const std::optional<InputFraming>& framing) {
  std::vector<std::string> raw;
  bool framed = true;
  if (!o.inputs.empty()) {
    std::istringstream lines(read_file(o.inputs));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      raw.push_back(line);
    }
    framed = false;
  } else if (o.exhaustive) {
    raw = all_strings(alphabet, *o.exhaustive);
  } else {
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < o.random.value_or(20); ++i) {
      raw.push_back(random_string(rng, alphabet, 0, o.max_len));
    }
  }
  std::vector<Case> cases;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string s = raw[i];
    if (framed && framing) s = framing->prefix + s + framing->suffix;
    cases.push_back({std::to_string(i), std::move(s)});
  }
  return cases;
}

int finish_verify(int cases, const std::optional<Divergence>& d,
                  std::ostream& out) {
  fmt::print(out, "cases\t{}\n", cases);
  if (!d) {
    fmt::print(out, "divergences\t0\n");
    return 0;
  }
  fmt::print(out, "divergence in case {} (input \"{}\") at step {}\n",
             d->case_id, d->input, d->step);
  fmt::print(out, "  expected: {}\n  got:      {}\n", d->expected, d->got);
  return 1;
}

int verify_random_machines(const Options& o, std::ostream& out) {
  if (!is_wcm(o.arch)) {
    throw Error(ErrorCode::kInvalidArgument,
                "--random-machines generates Turing machines (arch wcm21)");
  }
  std::mt19937_64 rng(o.seed);
  const int steps = o.steps.value_or(kRandomMachineSteps);
  int cases = 0;
  for (int i = 0; i < *o.random_machines; ++i) {
    const TuringMachine m = random_turing(rng);
    const WcmNetwork net = compile_wcm(m, steps);
    std::string alphabet;
    for (const auto& s : m.alphabet()) alphabet += s;
    for (int j = 0; j < o.random.value_or(20); ++j) {
      const std::string tape =
          random_string(rng, alphabet, 1, std::max(o.max_len, 1));
      ++cases;
      if (auto d = check_wcm(net, tape, steps)) {
        d->case_id = fmt::format("m{}.{}", i, j);
        return finish_verify(cases, d, out);
      }
    }
  }
  return finish_verify(cases, std::nullopt, out);
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.random_machines) return verify_random_machines(o, out);
  if (o.machine.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--machine is required");
  }
  const MachineFile file = load_for(o);
  int cases = 0;
  if (is_wcm(o.arch)) {
    const TuringMachine& m = *file.turing;
    const WcmNetwork net = wcm_network(m, o);
    std::string alphabet;
    if (file.framing) {
      alphabet = file.framing->alphabet;
    } else {
      for (const auto& s : m.alphabet()) alphabet += s;
    }
    const int steps = o.steps.value_or(net.layout.max_steps);
    for (const Case& c : corpus(o, alphabet, file.framing)) {
      ++cases;
      if (auto d = check_wcm(net, c.input, steps)) {
        d->case_id = c.id;
        return finish_verify(cases, d, out);
      }
    }
    return finish_verify(cases, std::nullopt, out);
  }
  const StackMachine& m = *file.stack;
  const SsNetwork net = ss_network(m, o);
  std::string alphabet;
  for (const auto& [ch, bit] : m.input_encoding()) alphabet += ch;
  for (const Case& c : corpus(o, alphabet, std::nullopt)) {
    ++cases;
    const int steps = o.steps.value_or(default_ss_steps(c.input));
    if (auto d = check_ss(net, m, c.input, steps)) {
      d->case_id = c.id;
      return finish_verify(cases, d, out);
    }
  }
  return finish_verify(cases, std::nullopt, out);
}

int cmd_precision(const Options& o, std::ostream& out) {
  const PrecisionReport r =
      precision_probe(o.base, o.pops, o.stacks, o.seed);
  fmt::print(out, "base {}, {} stacks, {} pops\n", r.base, r.stacks, o.pops);
  fmt::print(out, "pops\tmax_error\tflips\n");
  for (const auto& row : r.rows) {
    fmt::print(out, "{}\t{:.3e}\t{}\n", row.pops, row.max_error, row.flips);
  }
  if (r.first_flip) {
    fmt::print(out, "first flip\t{}\n", *r.first_flip);
  } else {
    fmt::print(out, "first flip\tnone\n");
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"Compile Turing and stack machines into neural networks."};
  app.name("tmnet");
  app.require_subcommand(1);
  const std::vector<std::string> arches{"wcm21", "ss95-4", "ss95-1"};

  auto* compile = app.add_subcommand("compile", "Write a weight document");
  compile->add_option("--machine", o.machine, "Machine file")->required();
  compile->add_option("--arch", o.arch)->check(CLI::IsMember(arches));
  compile->add_option("--T", o.steps, "Step budget (wcm21 only)");
  compile->add_option("--out", o.out, "Weight document")->required();

  auto* run = app.add_subcommand("run", "Simulate one input with a network");
  run->add_option("--machine", o.machine, "Machine file")->required();
  run->add_option("--arch", o.arch)->check(CLI::IsMember(arches));
  run->add_option("--input", o.input, "Input string or tape")->required();
  run->add_option("--T", o.steps, "Step budget");
  run->add_flag("--trace", o.trace, "Print every configuration");
  run->add_option("--net", o.net, "Use a compiled weight document");

  auto* verify =
      app.add_subcommand("verify", "Compare network and reference traces");
  verify->add_option("--machine", o.machine, "Machine file");
  verify->add_option("--arch", o.arch)->check(CLI::IsMember(arches));
  verify->add_option("--T", o.steps, "Step budget");
  verify->add_option("--net", o.net, "Use a compiled weight document");
  auto* from_file =
      verify->add_option("--inputs", o.inputs, "One input per line");
  auto* random =
      verify->add_option("--random", o.random, "Number of random inputs");
  verify->add_option("--seed", o.seed, "Corpus seed");
  verify->add_option("--max-len", o.max_len, "Longest random input");
  auto* exhaustive = verify->add_option(
      "--exhaustive", o.exhaustive, "Every input up to this length");
  verify->add_option("--random-machines", o.random_machines,
                     "Random Turing machines, each with --random inputs");
  from_file->excludes(random)->excludes(exhaustive);
  exhaustive->excludes(random);

  auto* precision =
      app.add_subcommand("precision", "Measure pop error growth");
  precision->add_option("--b", o.base, "Codec base")->check(
      CLI::Range(4, 1 << 20));
  precision->add_option("--pops", o.pops, "Pops per stack")
      ->check(CLI::Range(0, 64));
  precision->add_option("--stacks", o.stacks, "Random stacks")
      ->check(CLI::Range(1, 1 << 24));
  precision->add_option("--seed", o.seed, "Random seed");

  auto* oracle =
      app.add_subcommand("oracle", "Run the reference interpreter");
  oracle->add_option("--machine", o.machine, "Machine file")->required();
  oracle->add_option("--input", o.input, "Input string or tape")->required();
  oracle->add_option("--T", o.steps, "Step budget");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compile) return cmd_compile(o, out);
    if (*run) return cmd_run(o, out, err);
    if (*verify) return cmd_verify(o, out);
    if (*precision) return cmd_precision(o, out);
    return cmd_oracle(o, out, err);
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) {
      fmt::print(err, "error: {}: {}\n", to_string(v.code), v.message);
    }
    return 1;
  } catch (const Error& e) {
    fmt::print(err, "error: {}: {}\n", to_string(e.code()), e.what());
    return 1;
  }
}

}  // namespace tmnet::cli
