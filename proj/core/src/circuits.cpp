#include "tmnet/circuits.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "tmnet/error.hpp"

namespace tmnet {

namespace {

void check_range(int width, std::span<const int> idx) {
  for (int i : idx) {
    if (i < 0 || i >= width) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  fmt::format("index {} outside width {}", i, width));
    }
  }
}

void check_distinct(std::span<const int> idx) {
  std::set<int> seen(idx.begin(), idx.end());
  if (seen.size() != idx.size()) {
    throw Error(ErrorCode::kIndexCollision, "gate indices must be distinct");
  }
}

void clear_row(LinearLayer& layer, int out) {
  auto row = layer.weight.row(out);
  std::fill(row.begin(), row.end(), 0.0);
  layer.bias[out] = 0.0;
}

}  // namespace

LinearLayer identity_layer(int width) { return identity_layer(width, width); }

LinearLayer identity_layer(int in_width, int out_width) {
  LinearLayer l;
  l.weight = Matrix::eye(out_width, in_width);
  l.bias.assign(out_width, 0.0);
  l.activation = Activation::relu();
  return l;
}

void set_zero(LinearLayer& layer, int out) { clear_row(layer, out); }

void set_copy(LinearLayer& layer, int out, int src) {
  clear_row(layer, out);
  layer.weight(out, src) = 1.0;
}

void set_and(LinearLayer& layer, int out, std::span<const int> pos,
             std::span<const int> neg) {
  clear_row(layer, out);
  for (int p : pos) layer.weight(out, p) += 1.0;
  for (int n : neg) layer.weight(out, n) -= 1.0;
  const double k = static_cast<double>(pos.size() + neg.size());
  layer.bias[out] = static_cast<double>(neg.size()) - (k - 1.0);
}

void set_nor(LinearLayer& layer, int out, std::span<const int> inputs) {
  clear_row(layer, out);
  for (int i : inputs) layer.weight(out, i) -= 1.0;
  layer.bias[out] = 1.0;
}

void set_not(LinearLayer& layer, int out, int in) {
  clear_row(layer, out);
  layer.weight(out, in) = -1.0;
  layer.bias[out] = 1.0;
}

std::vector<LinearLayer> embed_gate(Gate gate, int width,
                                    std::span<const int> inputs, int output) {
  check_range(width, inputs);
  check_range(width, std::span<const int>(&output, 1));
  check_distinct(inputs);
  const std::size_t arity = inputs.size();
  if (gate == Gate::kNot ? arity != 1 : arity < 2) {
    throw Error(ErrorCode::kInvalidArity,
                fmt::format("gate arity {} not supported", arity));
  }

  std::vector<LinearLayer> layers;
  switch (gate) {
    case Gate::kNot: {
      auto l = identity_layer(width);
      set_not(l, output, inputs[0]);
      layers.push_back(std::move(l));
      break;
    }
    case Gate::kAnd: {
      auto l = identity_layer(width);
      set_and(l, output, inputs);
      layers.push_back(std::move(l));
      break;
    }
    case Gate::kNor: {
      auto l = identity_layer(width);
      set_nor(l, output, inputs);
      layers.push_back(std::move(l));
      break;
    }
    case Gate::kOr: {
      auto l1 = identity_layer(width);
      set_nor(l1, output, inputs);
      auto l2 = identity_layer(width);
      set_not(l2, output, output);
      layers.push_back(std::move(l1));
      layers.push_back(std::move(l2));
      break;
    }
    case Gate::kNand: {
      auto l1 = identity_layer(width);
      set_and(l1, output, inputs);
      auto l2 = identity_layer(width);
      set_not(l2, output, output);
      layers.push_back(std::move(l1));
      layers.push_back(std::move(l2));
      break;
    }
    case Gate::kXor: {
      if (arity != 2) {
        throw Error(ErrorCode::kInvalidArity, "xor takes exactly two inputs");
      }
      if (output == inputs[0] || output == inputs[1]) {
        throw Error(ErrorCode::kIndexCollision,
                    "xor output must differ from its inputs");
      }
      // AND(NAND(x1, x2), OR(x1, x2)) with the inputs still live, so the
      // OR term is x1 + x2 - AND = x1 + x2 - (1 - NAND) on binary inputs.
      auto l1 = identity_layer(width);
      set_and(l1, output, inputs);
      auto l2 = identity_layer(width);
      set_not(l2, output, output);
      auto l3 = identity_layer(width);
      clear_row(l3, output);
      l3.weight(output, output) = 2.0;
      l3.weight(output, inputs[0]) = 1.0;
      l3.weight(output, inputs[1]) = 1.0;
      l3.bias[output] = -2.0;
      layers.push_back(std::move(l1));
      layers.push_back(std::move(l2));
      layers.push_back(std::move(l3));
      break;
    }
  }
  return layers;
}

std::array<LinearLayer, 2> dnf_layers(const DnfSpec& dnf, int width_in,
                                      int width_out) {
  if (!dnf.mutually_exclusive) {
    throw Error(ErrorCode::kNonExclusiveClausesUnsupported,
                "only mutually exclusive clauses have a two-layer form");
  }
  if (width_in < 0 || width_out < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative width");
  }
  const int m = static_cast<int>(dnf.clauses.size());
  for (const auto& c : dnf.clauses) {
    check_range(width_in, c.positive);
    check_range(width_in, c.negative);
    check_range(width_out, c.outputs);
    std::vector<int> lits = c.positive;
    lits.insert(lits.end(), c.negative.begin(), c.negative.end());
    check_distinct(lits);
    if (lits.empty()) {
      throw Error(ErrorCode::kInvalidArity, "clause without literals");
    }
  }
  check_range(width_out, dnf.cleared);

  LinearLayer detect = identity_layer(width_in, width_in + m);
  for (int r = 0; r < m; ++r) {
    const auto& c = dnf.clauses[r];
    set_and(detect, width_in + r, c.positive, c.negative);
  }

  LinearLayer route = identity_layer(width_in + m, width_out);
  for (int d : dnf.cleared) clear_row(route, d);
  for (const auto& c : dnf.clauses) {
    for (int o : c.outputs) clear_row(route, o);
  }
  for (int r = 0; r < m; ++r) {
    for (int o : dnf.clauses[r].outputs) route.weight(o, width_in + r) += 1.0;
  }
  return {std::move(detect), std::move(route)};
}

std::vector<LinearLayer> half_adder(int width, int i, int j) {
  const std::array<int, 2> idx{i, j};
  check_range(width, idx);
  check_distinct(idx);

  // Layer 1: AND at i, NOR at j.
  auto l1 = identity_layer(width);
  l1.weight(i, j) = 1.0;
  l1.bias[i] = -1.0;
  l1.weight(j, i) = -1.0;
  l1.weight(j, j) = -1.0;
  l1.bias[j] = 1.0;

  // Layer 2: NAND at i, OR at j.
  auto l2 = identity_layer(width);
  l2.weight(i, i) = -1.0;
  l2.bias[i] = 1.0;
  l2.weight(j, j) = -1.0;
  l2.bias[j] = 1.0;

  // Layer 3: XOR = AND(NAND, OR) at i, carry = NOT(NAND) at j.
  auto l3 = identity_layer(width);
  l3.weight(i, j) = 1.0;
  l3.bias[i] = -1.0;
  l3.weight(j, i) = -1.0;
  l3.weight(j, j) = 0.0;
  l3.bias[j] = 1.0;

  return {std::move(l1), std::move(l2), std::move(l3)};
}

std::vector<LinearLayer> full_adder(int width, int a, int b, int carry) {
  const std::array<int, 3> idx{a, b, carry};
  check_range(width, idx);
  check_distinct(idx);

  std::vector<LinearLayer> layers = half_adder(width, a, b);
  for (auto& l : half_adder(width, a, carry)) layers.push_back(std::move(l));

  const std::array<int, 2> carries{b, carry};
  auto nor = identity_layer(width);
  set_nor(nor, carry, carries);
  set_zero(nor, b);
  auto negate = identity_layer(width);
  set_not(negate, carry, carry);
  layers.push_back(std::move(nor));
  layers.push_back(std::move(negate));
  return layers;
}

std::vector<LinearLayer> ripple_adder(int width, std::span<const int> x,
                                      std::span<const int> y, int carry) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("adder slices differ in width ({} vs {})",
                            x.size(), y.size()));
  }
  check_range(width, x);
  check_range(width, y);
  check_range(width, std::span<const int>(&carry, 1));
  std::vector<int> all(x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  all.push_back(carry);
  if (std::set<int>(all.begin(), all.end()).size() != all.size()) {
    throw Error(ErrorCode::kOverlappingSlices,
                "adder operands and carry must be disjoint");
  }
  std::vector<LinearLayer> layers;
  for (std::size_t bit = 0; bit < x.size(); ++bit) {
    for (auto& l : full_adder(width, x[bit], y[bit], carry)) {
      layers.push_back(std::move(l));
    }
  }
  return layers;
}

}  // namespace tmnet
