#pragma once

// Seeded generators for verification corpora. Draws use raw mt19937_64
// output reduced with %, so a seed yields the same corpus everywhere.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tmnet/machine.hpp"

namespace tmnet::cli {

// 2..max_states states (the last one terminal), 2..max_symbols
// single-letter symbols, and a transition for every non-terminal pair.
TuringMachine random_turing(std::mt19937_64& rng, int max_states = 4,
                            int max_symbols = 3);

// Length uniform in [min_len, max_len].
std::string random_string(std::mt19937_64& rng, std::string_view alphabet,
                          int min_len, int max_len);

// Every string of length 0..max_len, shorter first, then in alphabet order.
std::vector<std::string> all_strings(std::string_view alphabet, int max_len);

}  // namespace tmnet::cli
