#pragma once

// Oracle equivalence: run a compiled network and the reference interpreter
// on the same input and report the first step where they disagree.

#include <optional>
#include <string>
#include <string_view>

#include "tmnet/machine.hpp"
#include "tmnet/ss.hpp"
#include "tmnet/wcm.hpp"

namespace tmnet::cli {

struct Divergence {
  std::string case_id;
  std::string input;
  int step = 0;
  std::string expected;
  std::string got;
};

// `tape` is the full tape, one symbol per character.
std::optional<Divergence> check_wcm(const WcmNetwork& net,
                                    std::string_view tape, int max_steps);

// `source` is the machine as written (before any added reject state).
std::optional<Divergence> check_ss(const SsNetwork& net,
                                   const StackMachine& source,
                                   std::string_view input, int max_steps);

// Default step budget for stack machines.
int default_ss_steps(std::string_view input);

}  // namespace tmnet::cli
