#pragma once

// Machine description files (JSON). See machines/README.md for the schema.

#include <optional>
#include <string>
#include <string_view>

#include "tmnet/machine.hpp"

namespace tmnet::cli {

// How generated inputs are drawn and wrapped into a tape.
struct InputFraming {
  std::string alphabet;
  std::string prefix;
  std::string suffix;
};

struct MachineFile {
  enum class Kind { kTuring, kStack };

  Kind kind = Kind::kTuring;
  std::optional<TuringMachine> turing;
  std::optional<StackMachine> stack;
  std::optional<InputFraming> framing;
};

// Throws kMalformedMachine on schema errors and ValidationError on
// description errors.
TuringDescription parse_turing(std::string_view text);
StackDescription parse_stack(std::string_view text);
MachineFile parse_machine(std::string_view text);
MachineFile load_machine(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace tmnet::cli
