#pragma once

// Text forms of traces. Network and reference traces go through the same
// functions, so trace equality is a plain text diff.
//
//   Turing machine:  step<TAB>state<TAB>tape, head cell in brackets
//                    3	M	B[(]*E
//   Stack machine:   step<TAB>state<TAB>stack0<TAB>stack1 ..., top first,
//                    "-" for an empty stack
//                    2	R	10	1

#include <span>
#include <string>

#include "tmnet/machine.hpp"

namespace tmnet::cli {

std::string format_tape(const TuringMachine& m, const Configuration& c);
std::string trace_line(const TuringMachine& m, const Configuration& c);

std::string format_stack(std::span<const int> stack);
std::string trace_line(const StackMachine& m, const StackConfiguration& c);

std::string describe(const TuringMachine& m, const Outcome& o);
std::string describe(const StackMachine& m, const Outcome& o);

}  // namespace tmnet::cli
