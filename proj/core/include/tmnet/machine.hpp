#pragma once

// Machine descriptions and the reference interpreters every compiled
// network is checked against.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tmnet {

enum class Move : int { kLeft = -1, kRight = +1 };

// ---------------------------------------------------------------------------
// Turing machines
// ---------------------------------------------------------------------------

// Unvalidated description, as read from a machine file.
struct TuringDescription {
  struct Row {
    std::string state;
    std::string read;
    std::string next;
    std::string write;
    int move = +1;
  };

  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::string initial;
  std::vector<std::string> terminals;
  std::vector<Row> transitions;
  // Symbol produced for positions that were never on the tape. Defaults to
  // the first alphabet symbol.
  std::optional<std::string> blank;
};

struct Transition {
  int state = 0;
  int read = 0;
  int next = 0;
  int write = 0;
  Move move = Move::kRight;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Validated machine. States and symbols are identified by their index in
// declaration order; that order is also the one-hot order used by every
// compiler, so compiled weights are stable across runs.
class TuringMachine {
 public:
  // Throws ValidationError listing every violation found.
  static TuringMachine validate(const TuringDescription& description);

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  // Transitions in declaration order.
  const std::vector<Transition>& transitions() const { return transitions_; }
  int initial() const { return initial_; }
  int blank() const { return blank_; }
  bool is_terminal(int state) const { return terminal_.at(state); }
  std::vector<int> terminals() const;

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_symbols() const { return static_cast<int>(alphabet_.size()); }

  // nullptr when delta is undefined on (state, symbol).
  const Transition* lookup(int state, int symbol) const;

  std::optional<int> state_index(std::string_view name) const;
  std::optional<int> symbol_index(std::string_view name) const;

  // Tape from a string, one character per cell. Throws kUnknownSymbol
  // naming the first offending character.
  std::vector<int> tape_from_string(std::string_view text) const;
  std::string tape_to_string(std::span<const int> tape) const;

  // Stable 64-bit FNV-1a digest of the canonical description, hex encoded.
  std::string fingerprint() const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  std::vector<Transition> transitions_;
  std::vector<bool> terminal_;
  std::vector<int> table_;  // state * |alphabet| + symbol -> transition, or -1
  int initial_ = 0;
  int blank_ = 0;
};

struct Configuration {
  int state = 0;
  int head = 0;
  std::vector<int> tape;
  int step = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct Outcome {
  enum class Kind {
    kHalted,
    kStepLimitExceeded,
    kUndefinedTransition,
    kHeadOutOfRange,
    kPopOnEmpty,
  };

  Kind kind = Kind::kStepLimitExceeded;
  // Halted: the terminal state. Error outcomes: the state of the last
  // configuration. Unused for step-limit.
  int state = -1;
  // Turing machines: the symbol under the head. Stack machines: the
  // configuration combo index (see StackMachine::combo_index).
  int symbol = -1;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string_view to_string(Outcome::Kind kind);

struct Trace {
  std::vector<Configuration> configs;
  Outcome outcome;
};

// One application of delta. Throws kUndefinedTransition, or kHeadOutOfRange
// when the head leaves the tape without entering a terminal state.
Configuration tm_step(const TuringMachine& machine, const Configuration& c);

// Runs from (initial, head 0) until a terminal state or `max_steps` steps.
// Interpreter errors end the trace and are reported through its outcome.
Trace tm_run(const TuringMachine& machine, std::span<const int> tape,
             int max_steps);

// ---------------------------------------------------------------------------
// Stack machines
// ---------------------------------------------------------------------------

enum class StackOp { kNoop, kPush0, kPush1, kPop };
inline constexpr int kNumStackOps = 4;

// Classification of a stack by its top element.
enum class Top { kEmpty = 0, kZero = 1, kOne = 2 };
inline constexpr int kNumTopClasses = 3;

std::string_view to_string(StackOp op);
std::string_view to_string(Top top);

struct StackDescription {
  struct Rule {
    std::string state;
    std::vector<Top> tops;  // one per stack
    std::string next;
    std::vector<StackOp> ops;  // one per stack
  };

  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> terminals;
  int num_stacks = 2;
  std::vector<Rule> rules;
  std::map<char, int> input_encoding;
  // Terminal state entered on any configuration without a rule. When
  // absent such configurations are undefined transitions.
  std::optional<std::string> reject;
};

struct StackRule {
  int next = 0;
  std::vector<StackOp> ops;

  friend bool operator==(const StackRule&, const StackRule&) = default;
};

class StackMachine {
 public:
  // Throws ValidationError.
  static StackMachine validate(const StackDescription& description);
  // Skips the invariant checks that validate() enforces (pop on an empty
  // top, terminal rules); name resolution still applies. For exercising the
  // interpreter's runtime guards.
  static StackMachine from_unchecked(const StackDescription& description);

  const std::vector<std::string>& states() const { return states_; }
  int num_states() const { return static_cast<int>(states_.size()); }
  int num_stacks() const { return num_stacks_; }
  int initial() const { return initial_; }
  bool is_terminal(int state) const { return terminal_.at(state); }
  std::optional<int> reject() const { return reject_; }
  const std::map<char, int>& input_encoding() const { return input_encoding_; }
  std::optional<int> state_index(std::string_view name) const;

  // Number of (state, top_0, ..., top_{p-1}) combinations: |Q| * 3^p.
  int num_combos() const;
  int combo_index(int state, std::span<const Top> tops) const;
  int combo_state(int combo) const;
  std::vector<Top> combo_tops(int combo) const;

  // Rule explicitly given for this combo, if any.
  const StackRule* rule(int combo) const;
  // Rule that governs this combo: the explicit one, else the reject
  // routing when a reject state is designated, else nullopt.
  std::optional<StackRule> effective_rule(int combo) const;

  // Copy with an added terminal reject state (named `name`) if no reject is
  // designated yet. Returns the designated/added reject index.
  StackMachine with_reject(const std::string& name, int* reject_index) const;

  std::string fingerprint() const;

 private:
  static StackMachine build(const StackDescription& description, bool check);

  std::vector<std::string> states_;
  std::vector<bool> terminal_;
  int num_stacks_ = 2;
  int initial_ = 0;
  std::optional<int> reject_;
  std::vector<std::optional<StackRule>> rules_;  // by combo index
  std::map<char, int> input_encoding_;
};

struct StackConfiguration {
  int state = 0;
  std::vector<std::vector<int>> stacks;  // element 0 is the top
  int step = 0;

  friend bool operator==(const StackConfiguration&,
                         const StackConfiguration&) = default;
};

struct StackTrace {
  std::vector<StackConfiguration> configs;
  Outcome outcome;
};

Top classify(std::span<const int> stack);

// Stack 0 holds the encoded input with the first character on top; the
// remaining stacks start empty. Throws kUnmappedCharacter.
StackConfiguration encode_input_to_stacks(const StackMachine& machine,
                                          std::string_view input);

// Throws kUndefinedTransition or kPopOnEmpty.
StackConfiguration sm_step(const StackMachine& machine,
                           const StackConfiguration& c);

StackTrace sm_run(const StackMachine& machine, const StackConfiguration& c0,
                  int max_steps);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tmnet
