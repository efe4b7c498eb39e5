#pragma once

// Boolean gates, two-layer DNF blocks and binary adders as ReLU layers.
// Every builder emits full-width square layers that act as the identity on
// the dimensions they do not touch, so blocks compose by stacking.

#include <array>
#include <span>
#include <vector>

#include "tmnet/network.hpp"

namespace tmnet {

enum class Gate { kNot, kAnd, kNor, kOr, kNand, kXor };

// ReLU layer mapping the first min(in, out) dims through unchanged.
LinearLayer identity_layer(int width);
LinearLayer identity_layer(int in_width, int out_width);

// Row writers. Each replaces row `out` of `layer`; inputs refer to columns.
void set_zero(LinearLayer& layer, int out);
void set_copy(LinearLayer& layer, int out, int src);
// relu(sum(pos) + sum(1 - neg) - (|pos| + |neg| - 1))
void set_and(LinearLayer& layer, int out, std::span<const int> pos,
             std::span<const int> neg = {});
// relu(1 - sum(inputs))
void set_nor(LinearLayer& layer, int out, std::span<const int> inputs);
// relu(1 - x)
void set_not(LinearLayer& layer, int out, int in);

// Layer counts: NOT, AND, NOR -> 1; OR, NAND -> 2; XOR -> 3.
// Inputs must be distinct and in range; XOR is binary and its output must
// not be one of its inputs. The output may coincide with an input for the
// other gates.
std::vector<LinearLayer> embed_gate(Gate gate, int width,
                                    std::span<const int> inputs, int output);

struct Clause {
  std::vector<int> positive;
  std::vector<int> negative;
  // Output dims set to 1 when the clause fires.
  std::vector<int> outputs;
};

struct DnfSpec {
  std::vector<Clause> clauses;
  // At most one clause fires for any input. The only supported mode.
  bool mutually_exclusive = false;
  // Dims (besides every routed output) zeroed before routing.
  std::vector<int> cleared;
};

// Layer 1 (width_in -> width_in + m) appends one AND detector per clause.
// Layer 2 (-> width_out) passes identity dims through, zeroes cleared and
// routed dims, then sums each detector into its routed outputs.
std::array<LinearLayer, 2> dnf_layers(const DnfSpec& dnf, int width_in,
                                      int width_out);

// Three-layer half adder: afterwards i holds i xor j, j holds i and j.
std::vector<LinearLayer> half_adder(int width, int i, int j);

// Two half adders then OR of the two carries via NOR and NOT. Afterwards
// a = a xor b xor carry, carry = carry-out, b = 0.
std::vector<LinearLayer> full_adder(int width, int a, int b, int carry);

// x := (x + y) mod 2^k with LSB-first slices of equal width k. y is
// consumed (left zero) and `carry` must start at zero; it ends holding the
// overflow bit.
std::vector<LinearLayer> ripple_adder(int width, std::span<const int> x,
                                      std::span<const int> y, int carry);

}  // namespace tmnet
