#include "tmnet/cli/format.hpp"

#include <fmt/format.h>

namespace tmnet::cli {

std::string format_tape(const TuringMachine& m, const Configuration& c) {
  // A halted head may rest one cell past either end; shown as [].
  std::string out = c.head < 0 ? "[]" : "";
  for (std::size_t i = 0; i < c.tape.size(); ++i) {
    const std::string& sym = m.alphabet()[c.tape[i]];
    if (static_cast<int>(i) == c.head) {
      out += "[" + sym + "]";
    } else {
      out += sym;
    }
  }
  if (c.head >= static_cast<int>(c.tape.size())) out += "[]";
  return out;
}

std::string trace_line(const TuringMachine& m, const Configuration& c) {
  return fmt::format("{}\t{}\t{}", c.step, m.states()[c.state],
                     format_tape(m, c));
}

std::string format_stack(std::span<const int> stack) {
  if (stack.empty()) return "-";
  std::string out;
  for (int bit : stack) out += bit ? '1' : '0';
  return out;
}

std::string trace_line(const StackMachine& m, const StackConfiguration& c) {
  std::string out = fmt::format("{}\t{}", c.step, m.states()[c.state]);
  for (const auto& s : c.stacks) out += "\t" + format_stack(s);
  return out;
}

std::string describe(const TuringMachine& m, const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::kHalted:
      return fmt::format("halted in {}", m.states()[o.state]);
    case Outcome::Kind::kStepLimitExceeded:
      return "step-limit-exceeded";
    default:
      return fmt::format("{} in state {} reading {}", to_string(o.kind),
                         m.states()[o.state], m.alphabet()[o.symbol]);
  }
}

std::string describe(const StackMachine& m, const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::kHalted:
      return fmt::format("halted in {}", m.states()[o.state]);
    case Outcome::Kind::kStepLimitExceeded:
      return "step-limit-exceeded";
    default: {
      std::string tops;
      for (Top t : m.combo_tops(o.symbol)) {
        if (!tops.empty()) tops += ", ";
        tops += to_string(t);
      }
      return fmt::format("{} in state {} with tops ({})", to_string(o.kind),
                         m.states()[o.state], tops);
    }
  }
}

}  // namespace tmnet::cli
