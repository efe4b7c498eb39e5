#pragma once

#include <string>

#include "tmnet/cli/machine_file.hpp"

namespace tmnet::bench {

inline TuringMachine bp_turing() {
  return *cli::load_machine(std::string(TMNET_MACHINES_DIR) +
                            "/balanced_parens.json")
              .turing;
}

inline StackMachine bp_stack() {
  return *cli::load_machine(std::string(TMNET_MACHINES_DIR) +
                            "/balanced_parens_stack.json")
              .stack;
}

}  // namespace tmnet::bench
