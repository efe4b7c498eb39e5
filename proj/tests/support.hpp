#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tmnet/cli/machine_file.hpp"
#include "tmnet/machine.hpp"
#include "tmnet/network.hpp"

namespace tmnet::testing {

inline std::string machine_path(std::string_view name) {
  return std::string(TMNET_MACHINES_DIR) + "/" + std::string(name);
}

inline TuringMachine bp_turing() {
  return *cli::load_machine(machine_path("balanced_parens.json")).turing;
}

inline StackMachine bp_stack() {
  return *cli::load_machine(machine_path("balanced_parens_stack.json")).stack;
}

// Depth counter; independent of every machine in the repo.
inline bool balanced(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    depth += c == '(' ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

inline bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

inline bool same_bits(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    if (!same_bits(a.data()[i], b.data()[i])) return false;
  }
  return true;
}

inline bool same_bits(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

// Every weight, bias, gain and shape identical bit for bit.
inline bool same_bits(const Network& a, const Network& b) {
  if (a.input_width() != b.input_width() ||
      a.layers().size() != b.layers().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.layers().size(); ++i) {
    const Layer& x = a.layers()[i];
    const Layer& y = b.layers()[i];
    if (x.role != y.role || x.block != y.block ||
        x.op.index() != y.op.index()) {
      return false;
    }
    if (const auto* lx = std::get_if<LinearLayer>(&x.op)) {
      const auto& ly = std::get<LinearLayer>(y.op);
      if (!same_bits(lx->weight, ly.weight) || !same_bits(lx->bias, ly.bias) ||
          !(lx->activation == ly.activation)) {
        return false;
      }
    } else {
      const auto& ax = std::get<AttentionLayer>(x.op);
      const auto& ay = std::get<AttentionLayer>(y.op);
      if (ax.source != ay.source || !same_bits(ax.gain, ay.gain) ||
          !same_bits(ax.query, ay.query) ||
          !same_bits(ax.query_bias, ay.query_bias) ||
          !same_bits(ax.key, ay.key) || !same_bits(ax.key_bias, ay.key_bias) ||
          !same_bits(ax.value, ay.value) ||
          !same_bits(ax.value_bias, ay.value_bias) ||
          !same_bits(ax.null_key, ay.null_key) ||
          !same_bits(ax.null_value, ay.null_value) ||
          !same_bits(ax.merge, ay.merge)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace tmnet::testing
