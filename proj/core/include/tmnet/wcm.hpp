#pragma once

// Encoder-decoder transformer that simulates a Turing machine one decoder
// position per machine step. The step network is a fixed stack of ReLU
// feedforward blocks and hard-attention lookups over a binary layout.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tmnet/machine.hpp"
#include "tmnet/network.hpp"

namespace tmnet {

struct Slice {
  int offset = 0;
  int size = 0;

  int operator[](int i) const { return offset + i; }
  int end() const { return offset + size; }
  std::vector<int> indices() const;

  friend bool operator==(const Slice&, const Slice&) = default;
};

// Decoder embedding, in order:
//   st     one-hot state             |Q|
//   sym1   one-hot symbol under head |G|
//   sym2   one-hot symbol written    |G|
//   pos1   step number               k
//   pos2   head position             k
//   pos3   next head position        k
//   scr1   last written symbol       |G|
//   scr2   original tape symbol      |G|
//   scr3   binary search register    k
//   scr4   (visited, needs blank)    2
//   scr5   (left, right, carry)      3
// Binary numbers are LSB first and k = ceil(log2 T).
struct SliceLayout {
  int num_states = 0;
  int num_symbols = 0;
  int max_steps = 0;
  int k = 0;
  int width = 0;
  Slice st, sym1, sym2, pos1, pos2, pos3, scr1, scr2, scr3, scr4, scr5;

  std::vector<std::pair<std::string, Slice>> named() const;

  friend bool operator==(const SliceLayout&, const SliceLayout&) = default;
};

// Throws kInvalidArgument unless max_steps >= 2.
SliceLayout build_layout(const TuringMachine& machine, int max_steps);

// Row i is one-hot(tape[i]) followed by the k bits of i. Throws
// kTapeTooLong when the tape has more than 2^k cells.
Matrix build_encoder(const SliceLayout& layout, std::span<const int> tape);

// Stage builders, in pipeline order.
std::array<LinearLayer, 2> build_transition(const TuringMachine& machine,
                                            const SliceLayout& layout);
// Preprocess (w -> w+k), k full adders, project down (-> w).
std::vector<LinearLayer> build_adder_stage(const SliceLayout& layout);
AttentionLayer build_visited_flag(const SliceLayout& layout);
// MSB first; layer i writes bit k-1-i of scr3.
std::vector<AttentionLayer> build_binary_search(const SliceLayout& layout);
AttentionLayer build_get_last_written(const SliceLayout& layout);
AttentionLayer build_get_initial(const SliceLayout& layout);
// satlin(2x - 1/2) on `target`, identity elsewhere.
LinearLayer build_sharpen(const SliceLayout& layout, const Slice& target);
// GetV, ArrangeSymbols, CombineSymbols.
std::array<LinearLayer, 3> build_assemble(const TuringMachine& machine,
                                          const SliceLayout& layout);

// beta(t): binary t in pos1, zero elsewhere.
Vector step_embedding(const SliceLayout& layout, int t);
// h_0: initial state, tape[0] under the head, head and step 0.
Vector initial_state(const TuringMachine& machine, const SliceLayout& layout,
                     std::span<const int> tape);

struct WcmCensus {
  int width = 0;
  int detectors = 0;
  int transition_layers = 0;
  int preprocess_layers = 0;
  int full_adders = 0;
  int project_down_layers = 0;
  int self_attention = 0;
  int cross_attention = 0;
  int sharpen_layers = 0;
  int assembly_layers = 0;
  int total_layers = 0;
};

struct WcmNetwork {
  TuringMachine machine;
  SliceLayout layout;
  Network step_net;

  WcmCensus census() const;
};

WcmNetwork compile_wcm(const TuringMachine& machine, int max_steps);

// Pairs a machine with a previously compiled step network, checking that
// the widths agree with the layout for `max_steps`.
WcmNetwork wcm_from_network(const TuringMachine& machine, int max_steps,
                            Network step_net);

struct WcmRun {
  // Decoded configurations and outcome, comparable with tm_run.
  Trace trace;
  // Terminal state name when the run halted.
  std::optional<std::string> answer;
};

// Runs at most `max_steps` (<= the compiled T) decoder positions. Every
// linear layer output must be exactly binary and every attention output
// within 1e-9 of binary, otherwise kNonBinaryActivation is thrown.
WcmRun simulate(const WcmNetwork& net, std::span<const int> tape,
                int max_steps);

}  // namespace tmnet
