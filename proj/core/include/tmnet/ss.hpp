#pragma once

// Recurrent satlin networks that simulate a stack machine, with every
// stack held as one Cantor-encoded value. Two variants:
//
//   4-layer (b = 4)   state [st | v_0 .. v_{p-1}], one step =
//     F4  top and nonempty bits of every stack
//     F3  one-hot detector over (state, top class per stack)
//     F2  next state beta d, and every candidate stack value gated by
//         the operation one-hot gamma d
//     F1  next state and the sum of the gated candidates
//
//   1-layer (b = 10 p^2)   one satlin layer per step over an augmented
//     state in which every (combo, stack) pair keeps its own copy of the
//     post-step nonempty bit, top bit and value, zero unless the combo
//     fired. The live quantities are the sums of those copies, so the
//     next step can detect and update in a single layer.

#include <optional>
#include <vector>

#include "tmnet/cantor.hpp"
#include "tmnet/machine.hpp"
#include "tmnet/network.hpp"

namespace tmnet {

struct RoutingWeights {
  Matrix beta;   // |Q| x combos
  Matrix gamma;  // 4p x combos, row 4i + op for stack i
  double residual = 0.0;
};

// Least-squares fit of next-state and operation one-hots against the
// detector one-hots of all combos. Non-terminal combos need an effective
// rule; terminal combos map to themselves with no-ops. Throws
// kUndefinedTransition, kRankDeficientSystem or kResidualTooLarge (also
// when some combo is not reproduced exactly).
RoutingWeights solve_routing(const StackMachine& machine);

// F4 and F3 of the 4-layer step: [st | v] -> [d | top | v].
std::vector<LinearLayer> build_detector(const StackMachine& machine,
                                        const CantorCodec& codec);

enum class SsVariant { kFourLayer, kOneLayer };

struct SsNetwork {
  SsVariant variant = SsVariant::kFourLayer;
  // Compiled machine; has a reject state even if the source did not.
  StackMachine machine;
  // Set when compilation had to add the reject state.
  std::optional<int> synthesized_reject;
  CantorCodec codec{4};
  RoutingWeights routing;
  Network step_net;

  int detector_width() const { return machine.num_combos(); }
  int layers_per_step() const {
    return static_cast<int>(step_net.layers().size());
  }
  Vector encode_state(const StackConfiguration& c) const;
  // State index and stacks; throws kNonBinaryActivation when the state
  // part is not exactly one-hot.
  StackConfiguration decode_state(const Vector& x) const;
};

// Machines without a reject state get one named "reject".
SsNetwork compile4(const StackMachine& machine);
// Requires two stacks; uses b = 40.
SsNetwork compile1(const StackMachine& machine);

// Pairs a machine with a previously compiled step network.
SsNetwork ss_from_network(const StackMachine& machine, SsVariant variant,
                          Network step_net);

// Same contract as sm_run on the source machine. Entering an added reject
// state is reported as an undefined transition.
StackTrace simulate(const SsNetwork& net, const StackConfiguration& c0,
                    int max_steps);

}  // namespace tmnet
