#include "tmnet/machine.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "tmnet/error.hpp"

namespace tmnet {

namespace {

std::optional<int> find_name(const std::vector<std::string>& names,
                             std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

void check_unique(const std::vector<std::string>& names, const char* what,
                  std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      out.push_back({ErrorCode::kMalformedMachine,
                     fmt::format("{} '{}' declared twice", what, n)});
    }
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view to_string(Outcome::Kind kind) {
  switch (kind) {
    case Outcome::Kind::kHalted: return "halted";
    case Outcome::Kind::kStepLimitExceeded: return "step-limit-exceeded";
    case Outcome::Kind::kUndefinedTransition: return "undefined-transition";
    case Outcome::Kind::kHeadOutOfRange: return "head-out-of-range";
    case Outcome::Kind::kPopOnEmpty: return "pop-on-empty";
  }
  return "unknown";
}

std::string_view to_string(StackOp op) {
  switch (op) {
    case StackOp::kNoop: return "noop";
    case StackOp::kPush0: return "push0";
    case StackOp::kPush1: return "push1";
    case StackOp::kPop: return "pop";
  }
  return "unknown";
}

std::string_view to_string(Top top) {
  switch (top) {
    case Top::kEmpty: return "empty";
    case Top::kZero: return "0";
    case Top::kOne: return "1";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// TuringMachine
// ---------------------------------------------------------------------------

TuringMachine TuringMachine::validate(const TuringDescription& d) {
  std::vector<Violation> errs;
  check_unique(d.states, "state", errs);
  check_unique(d.alphabet, "symbol", errs);
  if (d.states.empty()) {
    errs.push_back({ErrorCode::kMalformedMachine, "no states declared"});
  }
  if (d.alphabet.empty()) {
    errs.push_back({ErrorCode::kMalformedMachine, "empty alphabet"});
  }
  for (const auto& s : d.alphabet) {
    if (s.size() != 1) {
      errs.push_back({ErrorCode::kMalformedMachine,
                      fmt::format("symbol '{}' is not a single character", s)});
    }
  }

  TuringMachine m;
  m.states_ = d.states;
  m.alphabet_ = d.alphabet;
  m.terminal_.assign(d.states.size(), false);

  auto state_ref = [&](const std::string& name, const char* ctx) -> int {
    auto idx = find_name(d.states, name);
    if (!idx) {
      errs.push_back({ErrorCode::kUnknownState,
                      fmt::format("{} references undeclared state '{}'", ctx,
                                  name)});
      return -1;
    }
    return *idx;
  };
  auto symbol_ref = [&](const std::string& name, const char* ctx) -> int {
    auto idx = find_name(d.alphabet, name);
    if (!idx) {
      errs.push_back({ErrorCode::kUnknownSymbol,
                      fmt::format("{} references undeclared symbol '{}'", ctx,
                                  name)});
      return -1;
    }
    return *idx;
  };

  m.initial_ = state_ref(d.initial, "initial");
  for (const auto& t : d.terminals) {
    int idx = state_ref(t, "terminals");
    if (idx >= 0) m.terminal_[idx] = true;
  }
  m.blank_ = d.blank ? symbol_ref(*d.blank, "blank") : 0;

  const int nsym = static_cast<int>(d.alphabet.size());
  m.table_.assign(d.states.size() * d.alphabet.size(), -1);
  for (std::size_t r = 0; r < d.transitions.size(); ++r) {
    const auto& row = d.transitions[r];
    const std::string ctx = fmt::format("transition {}", r);
    Transition t;
    t.state = state_ref(row.state, ctx.c_str());
    t.read = symbol_ref(row.read, ctx.c_str());
    t.next = state_ref(row.next, ctx.c_str());
    t.write = symbol_ref(row.write, ctx.c_str());
    if (row.move != -1 && row.move != +1) {
      errs.push_back({ErrorCode::kMalformedMachine,
                      fmt::format("{}: move must be -1 or +1, got {}", ctx,
                                  row.move)});
    }
    t.move = row.move < 0 ? Move::kLeft : Move::kRight;
    if (t.state < 0 || t.read < 0 || t.next < 0 || t.write < 0) continue;
    if (m.terminal_[t.state]) {
      errs.push_back({ErrorCode::kTerminalHasOutgoing,
                      fmt::format("{}: terminal state '{}' has an outgoing "
                                  "transition on '{}'",
                                  ctx, row.state, row.read)});
    }
    int& slot = m.table_[t.state * nsym + t.read];
    if (slot >= 0) {
      errs.push_back({ErrorCode::kDuplicateTransition,
                      fmt::format("{}: ({}, {}) already defined", ctx,
                                  row.state, row.read)});
      continue;
    }
    slot = static_cast<int>(m.transitions_.size());
    m.transitions_.push_back(t);
  }

  if (!errs.empty()) throw ValidationError(std::move(errs));
  return m;
}

std::vector<int> TuringMachine::terminals() const {
  std::vector<int> out;
  for (int q = 0; q < num_states(); ++q) {
    if (terminal_[q]) out.push_back(q);
  }
  return out;
}

const Transition* TuringMachine::lookup(int state, int symbol) const {
  if (state < 0 || state >= num_states() || symbol < 0 ||
      symbol >= num_symbols()) {
    return nullptr;
  }
  int idx = table_[state * num_symbols() + symbol];
  return idx < 0 ? nullptr : &transitions_[idx];
}

std::optional<int> TuringMachine::state_index(std::string_view name) const {
  return find_name(states_, name);
}

std::optional<int> TuringMachine::symbol_index(std::string_view name) const {
  return find_name(alphabet_, name);
}

std::vector<int> TuringMachine::tape_from_string(std::string_view text) const {
  std::vector<int> tape;
  tape.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto idx = symbol_index(text.substr(i, 1));
    if (!idx) {
      throw Error(ErrorCode::kUnknownSymbol,
                  fmt::format("input symbol '{}' at position {} is not in the "
                              "alphabet",
                              text[i], i));
    }
    tape.push_back(*idx);
  }
  return tape;
}

std::string TuringMachine::tape_to_string(std::span<const int> tape) const {
  std::string out;
  for (int s : tape) out += alphabet_.at(s);
  return out;
}

std::string TuringMachine::fingerprint() const {
  std::string canon = "turing\n";
  for (const auto& s : states_) canon += "state " + s + "\n";
  for (const auto& s : alphabet_) canon += "symbol " + s + "\n";
  canon += "initial " + states_[initial_] + "\n";
  for (int q : terminals()) canon += "terminal " + states_[q] + "\n";
  canon += "blank " + alphabet_[blank_] + "\n";
  for (const auto& t : transitions_) {
    canon += fmt::format("delta {} {} {} {} {}\n", states_[t.state],
                         alphabet_[t.read], states_[t.next],
                         alphabet_[t.write], static_cast<int>(t.move));
  }
  return fmt::format("{:016x}", fnv1a64(canon));
}

Configuration tm_step(const TuringMachine& m, const Configuration& c) {
  if (c.head < 0 || c.head >= static_cast<int>(c.tape.size())) {
    throw Error(ErrorCode::kHeadOutOfRange,
                fmt::format("head {} outside tape of length {}", c.head,
                            c.tape.size()));
  }
  if (m.is_terminal(c.state)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("state '{}' is terminal", m.states()[c.state]));
  }
  const int symbol = c.tape[c.head];
  const Transition* t = m.lookup(c.state, symbol);
  if (t == nullptr) {
    throw Error(ErrorCode::kUndefinedTransition,
                fmt::format("delta undefined on ({}, {})", m.states()[c.state],
                            m.alphabet()[symbol]));
  }
  const int head = c.head + static_cast<int>(t->move);
  // A terminal state reads nothing, so its head may rest off the tape.
  const bool off = head < 0 || head >= static_cast<int>(c.tape.size());
  if (off && !m.is_terminal(t->next)) {
    throw Error(ErrorCode::kHeadOutOfRange,
                fmt::format("move from {} leaves the tape of length {}",
                            c.head, c.tape.size()));
  }
  Configuration next = c;
  next.tape[c.head] = t->write;
  next.state = t->next;
  next.head = head;
  next.step = c.step + 1;
  return next;
}

Trace tm_run(const TuringMachine& m, std::span<const int> tape,
             int max_steps) {
  if (max_steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 1");
  }
  if (tape.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tape must not be empty");
  }
  for (int s : tape) {
    if (s < 0 || s >= m.num_symbols()) {
      throw Error(ErrorCode::kUnknownSymbol,
                  fmt::format("tape symbol index {} out of range", s));
    }
  }
  Trace trace;
  trace.configs.push_back(
      Configuration{m.initial(), 0, {tape.begin(), tape.end()}, 0});
  while (true) {
    const Configuration& c = trace.configs.back();
    if (m.is_terminal(c.state)) {
      trace.outcome = {Outcome::Kind::kHalted, c.state, -1};
      break;
    }
    if (c.step >= max_steps) {
      trace.outcome = {Outcome::Kind::kStepLimitExceeded, -1, -1};
      break;
    }
    try {
      Configuration next = tm_step(m, c);
      trace.configs.push_back(std::move(next));
    } catch (const Error& e) {
      Outcome::Kind kind = e.code() == ErrorCode::kUndefinedTransition
                               ? Outcome::Kind::kUndefinedTransition
                               : Outcome::Kind::kHeadOutOfRange;
      if (e.code() != ErrorCode::kUndefinedTransition &&
          e.code() != ErrorCode::kHeadOutOfRange) {
        throw;
      }
      trace.outcome = {kind, c.state, c.tape[c.head]};
      break;
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// StackMachine
// ---------------------------------------------------------------------------

StackMachine StackMachine::validate(const StackDescription& d) {
  return build(d, true);
}

StackMachine StackMachine::from_unchecked(const StackDescription& d) {
  return build(d, false);
}

StackMachine StackMachine::build(const StackDescription& d, bool check) {
  std::vector<Violation> errs;
  check_unique(d.states, "state", errs);
  if (d.states.empty()) {
    errs.push_back({ErrorCode::kMalformedMachine, "no states declared"});
  }
  if (d.num_stacks < 1) {
    errs.push_back({ErrorCode::kMalformedMachine, "need at least one stack"});
  }

  StackMachine m;
  m.states_ = d.states;
  m.terminal_.assign(d.states.size(), false);
  m.num_stacks_ = std::max(d.num_stacks, 1);

  auto state_ref = [&](const std::string& name, const std::string& ctx) {
    auto idx = find_name(d.states, name);
    if (!idx) {
      errs.push_back({ErrorCode::kUnknownState,
                      fmt::format("{} references undeclared state '{}'", ctx,
                                  name)});
      return -1;
    }
    return *idx;
  };

  m.initial_ = state_ref(d.initial, "initial");
  for (const auto& t : d.terminals) {
    int idx = state_ref(t, "terminals");
    if (idx >= 0) m.terminal_[idx] = true;
  }
  if (d.reject) {
    int idx = state_ref(*d.reject, "reject");
    if (idx >= 0) {
      m.reject_ = idx;
      if (check && !m.terminal_[idx]) {
        errs.push_back({ErrorCode::kMalformedMachine,
                        fmt::format("reject state '{}' is not terminal",
                                    *d.reject)});
      }
    }
  }
  for (const auto& [ch, bit] : d.input_encoding) {
    if (bit != 0 && bit != 1) {
      errs.push_back({ErrorCode::kMalformedMachine,
                      fmt::format("input '{}' encodes to {}, not a bit", ch,
                                  bit)});
    }
  }
  m.input_encoding_ = d.input_encoding;

  m.rules_.assign(static_cast<std::size_t>(std::max(m.num_combos(), 0)),
                  std::nullopt);
  for (std::size_t r = 0; r < d.rules.size(); ++r) {
    const auto& row = d.rules[r];
    const std::string ctx = fmt::format("rule {}", r);
    const int state = state_ref(row.state, ctx);
    const int next = state_ref(row.next, ctx);
    if (static_cast<int>(row.tops.size()) != m.num_stacks_ ||
        static_cast<int>(row.ops.size()) != m.num_stacks_) {
      errs.push_back({ErrorCode::kMalformedMachine,
                      fmt::format("{}: expected {} tops and ops", ctx,
                                  m.num_stacks_)});
      continue;
    }
    if (state < 0 || next < 0) continue;
    if (check && m.terminal_[state]) {
      errs.push_back({ErrorCode::kTerminalHasOutgoing,
                      fmt::format("{}: terminal state '{}' has a rule", ctx,
                                  row.state)});
    }
    for (int i = 0; i < m.num_stacks_; ++i) {
      if (check && row.tops[i] == Top::kEmpty && row.ops[i] == StackOp::kPop) {
        errs.push_back({ErrorCode::kPopOnEmpty,
                        fmt::format("{}: pop prescribed for empty stack {}",
                                    ctx, i)});
      }
    }
    const int combo = m.combo_index(state, row.tops);
    auto& slot = m.rules_[combo];
    if (slot) {
      errs.push_back({ErrorCode::kDuplicateTransition,
                      fmt::format("{}: configuration already has a rule", ctx)});
      continue;
    }
    slot = StackRule{next, row.ops};
  }

  if (!errs.empty()) throw ValidationError(std::move(errs));
  return m;
}

std::optional<int> StackMachine::state_index(std::string_view name) const {
  return find_name(states_, name);
}

int StackMachine::num_combos() const {
  int n = num_states();
  for (int i = 0; i < num_stacks_; ++i) n *= kNumTopClasses;
  return n;
}

int StackMachine::combo_index(int state, std::span<const Top> tops) const {
  int idx = state;
  for (Top t : tops) idx = idx * kNumTopClasses + static_cast<int>(t);
  return idx;
}

int StackMachine::combo_state(int combo) const {
  for (int i = 0; i < num_stacks_; ++i) combo /= kNumTopClasses;
  return combo;
}

std::vector<Top> StackMachine::combo_tops(int combo) const {
  std::vector<Top> tops(num_stacks_);
  for (int i = num_stacks_ - 1; i >= 0; --i) {
    tops[i] = static_cast<Top>(combo % kNumTopClasses);
    combo /= kNumTopClasses;
  }
  return tops;
}

const StackRule* StackMachine::rule(int combo) const {
  const auto& slot = rules_.at(combo);
  return slot ? &*slot : nullptr;
}

std::optional<StackRule> StackMachine::effective_rule(int combo) const {
  if (const StackRule* r = rule(combo)) return *r;
  if (reject_ && !is_terminal(combo_state(combo))) {
    return StackRule{*reject_,
                     std::vector<StackOp>(num_stacks_, StackOp::kNoop)};
  }
  return std::nullopt;
}

StackMachine StackMachine::with_reject(const std::string& name,
                                       int* reject_index) const {
  if (reject_) {
    if (reject_index) *reject_index = *reject_;
    return *this;
  }
  StackMachine m = *this;
  std::string unique = name;
  while (find_name(m.states_, unique)) unique += "'";
  m.states_.push_back(unique);
  m.terminal_.push_back(true);
  m.reject_ = num_states();
  // Combo indices are state-major, so existing entries keep their index.
  m.rules_.resize(static_cast<std::size_t>(m.num_combos()));
  if (reject_index) *reject_index = *m.reject_;
  return m;
}

std::string StackMachine::fingerprint() const {
  std::string canon = fmt::format("stack {}\n", num_stacks_);
  for (const auto& s : states_) canon += "state " + s + "\n";
  canon += "initial " + states_[initial_] + "\n";
  for (int q = 0; q < num_states(); ++q) {
    if (terminal_[q]) canon += "terminal " + states_[q] + "\n";
  }
  if (reject_) canon += "reject " + states_[*reject_] + "\n";
  for (const auto& [ch, bit] : input_encoding_) {
    canon += fmt::format("encode {} {}\n", ch, bit);
  }
  for (int c = 0; c < num_combos(); ++c) {
    const StackRule* r = rule(c);
    if (!r) continue;
    canon += fmt::format("rule {} {}", c, states_[r->next]);
    for (StackOp op : r->ops) canon += fmt::format(" {}", to_string(op));
    canon += "\n";
  }
  return fmt::format("{:016x}", fnv1a64(canon));
}

Top classify(std::span<const int> stack) {
  if (stack.empty()) return Top::kEmpty;
  return stack.front() == 0 ? Top::kZero : Top::kOne;
}

StackConfiguration encode_input_to_stacks(const StackMachine& m,
                                          std::string_view input) {
  StackConfiguration c;
  c.state = m.initial();
  c.stacks.assign(m.num_stacks(), {});
  for (std::size_t i = 0; i < input.size(); ++i) {
    auto it = m.input_encoding().find(input[i]);
    if (it == m.input_encoding().end()) {
      throw Error(ErrorCode::kUnmappedCharacter,
                  fmt::format("input character '{}' at position {} has no "
                              "encoding",
                              input[i], i));
    }
    c.stacks[0].push_back(it->second);
  }
  return c;
}

StackConfiguration sm_step(const StackMachine& m,
                           const StackConfiguration& c) {
  std::vector<Top> tops;
  tops.reserve(c.stacks.size());
  for (const auto& s : c.stacks) tops.push_back(classify(s));
  const int combo = m.combo_index(c.state, tops);
  auto rule = m.effective_rule(combo);
  if (!rule) {
    throw Error(ErrorCode::kUndefinedTransition,
                fmt::format("no rule for state '{}' with tops ({})",
                            m.states()[c.state],
                            fmt::join([&] {
                              std::vector<std::string> names;
                              for (Top t : tops)
                                names.emplace_back(to_string(t));
                              return names;
                            }(),
                                      ", ")));
  }
  StackConfiguration next = c;
  next.state = rule->next;
  next.step = c.step + 1;
  for (int i = 0; i < m.num_stacks(); ++i) {
    auto& s = next.stacks[i];
    switch (rule->ops[i]) {
      case StackOp::kNoop: break;
      case StackOp::kPush0: s.insert(s.begin(), 0); break;
      case StackOp::kPush1: s.insert(s.begin(), 1); break;
      case StackOp::kPop:
        if (s.empty()) {
          throw Error(ErrorCode::kPopOnEmpty,
                      fmt::format("pop on empty stack {} in state '{}'", i,
                                  m.states()[c.state]));
        }
        s.erase(s.begin());
        break;
    }
  }
  return next;
}

StackTrace sm_run(const StackMachine& m, const StackConfiguration& c0,
                  int max_steps) {
  if (max_steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 0");
  }
  StackTrace trace;
  trace.configs.push_back(c0);
  while (true) {
    const StackConfiguration& c = trace.configs.back();
    if (m.is_terminal(c.state)) {
      trace.outcome = {Outcome::Kind::kHalted, c.state, -1};
      break;
    }
    if (c.step - c0.step >= max_steps) {
      trace.outcome = {Outcome::Kind::kStepLimitExceeded, -1, -1};
      break;
    }
    try {
      trace.configs.push_back(sm_step(m, c));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedTransition &&
          e.code() != ErrorCode::kPopOnEmpty) {
        throw;
      }
      std::vector<Top> tops;
      for (const auto& s : c.stacks) tops.push_back(classify(s));
      trace.outcome = {e.code() == ErrorCode::kPopOnEmpty
                           ? Outcome::Kind::kPopOnEmpty
                           : Outcome::Kind::kUndefinedTransition,
                       c.state, m.combo_index(c.state, tops)};
      break;
    }
  }
  return trace;
}

}  // namespace tmnet
