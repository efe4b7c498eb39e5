#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"
#include "tmnet/circuits.hpp"
#include "tmnet/error.hpp"

namespace tmnet {
namespace {

Vector run(const std::vector<LinearLayer>& layers, Vector x) {
  for (const LinearLayer& l : layers) x = apply_linear(l, x);
  return x;
}

Vector run(const std::array<LinearLayer, 2>& layers, Vector x) {
  return run(std::vector<LinearLayer>(layers.begin(), layers.end()), x);
}

ErrorCode gate_error(Gate g, int width, std::vector<int> in, int out) {
  try {
    embed_gate(g, width, in, out);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

std::vector<int> bits(int value, int k) {
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = (value >> i) & 1;
  return out;
}

TEST(Gates, LayerCounts) {
  const std::vector<int> in{0, 1};
  EXPECT_EQ(embed_gate(Gate::kNot, 3, std::vector<int>{0}, 2).size(), 1U);
  EXPECT_EQ(embed_gate(Gate::kAnd, 3, in, 2).size(), 1U);
  EXPECT_EQ(embed_gate(Gate::kNor, 3, in, 2).size(), 1U);
  EXPECT_EQ(embed_gate(Gate::kOr, 3, in, 2).size(), 2U);
  EXPECT_EQ(embed_gate(Gate::kNand, 3, in, 2).size(), 2U);
  EXPECT_EQ(embed_gate(Gate::kXor, 3, in, 2).size(), 3U);
}

TEST(Gates, TruthTables) {
  const std::vector<int> in{0, 1};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Vector x{double(a), double(b), 0.0};
      auto out = [&](Gate g) { return run(embed_gate(g, 3, in, 2), x)[2]; };
      EXPECT_EQ(out(Gate::kAnd), double(a & b));
      EXPECT_EQ(out(Gate::kNor), double(!(a | b)));
      EXPECT_EQ(out(Gate::kOr), double(a | b));
      EXPECT_EQ(out(Gate::kNand), double(!(a & b)));
      EXPECT_EQ(out(Gate::kXor), double(a ^ b));
    }
    const Vector x{double(a), 0.0, 0.0};
    EXPECT_EQ(run(embed_gate(Gate::kNot, 3, std::vector<int>{0}, 2), x)[2],
              double(!a));
  }
}

TEST(Gates, AndIntoInput) {
  const std::vector<int> in{0, 1};
  const auto layers = embed_gate(Gate::kAnd, 2, in, 0);
  EXPECT_EQ(run(layers, {1, 1})[0], 1.0);
  EXPECT_EQ(run(layers, {1, 0})[0], 0.0);
  EXPECT_EQ(run(layers, {0, 1})[0], 0.0);
  EXPECT_EQ(run(layers, {0, 0})[0], 0.0);
}

TEST(Gates, TernaryAnd) {
  const std::vector<int> in{0, 1, 2};
  const auto layers = embed_gate(Gate::kAnd, 4, in, 3);
  EXPECT_EQ(run(layers, {1, 1, 1, 0})[3], 1.0);
  EXPECT_EQ(run(layers, {1, 1, 0, 0})[3], 0.0);
}

TEST(Gates, OtherDimsPassThrough) {
  const std::vector<int> in{3, 5};
  Vector x(10, 0.0);
  for (int i = 0; i < 10; i += 2) x[i] = 1.0;
  x[3] = 1.0;
  x[5] = 1.0;
  for (Gate g : {Gate::kAnd, Gate::kNor, Gate::kOr, Gate::kNand, Gate::kXor}) {
    const Vector y = run(embed_gate(g, 10, in, 7), x);
    for (int i = 0; i < 10; ++i) {
      if (i != 7) EXPECT_EQ(y[i], x[i]) << i;
    }
  }
}

TEST(Gates, Errors) {
  EXPECT_EQ(gate_error(Gate::kAnd, 3, {0, 3}, 2), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(gate_error(Gate::kAnd, 3, {0, 0}, 2), ErrorCode::kIndexCollision);
  EXPECT_EQ(gate_error(Gate::kXor, 3, {0, 1}, 1), ErrorCode::kIndexCollision);
  EXPECT_EQ(gate_error(Gate::kXor, 4, {0, 1, 2}, 3), ErrorCode::kInvalidArity);
  EXPECT_EQ(gate_error(Gate::kNot, 3, {0, 1}, 2), ErrorCode::kInvalidArity);
}

TEST(Dnf, TwoClauses) {
  DnfSpec dnf;
  dnf.mutually_exclusive = true;
  dnf.clauses = {{{0, 1}, {}, {2}}, {{0}, {1}, {3}}};
  const auto layers = dnf_layers(dnf, 4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Vector y = run(layers, {double(a), double(b), 0, 0});
      EXPECT_EQ(y[0], a);
      EXPECT_EQ(y[1], b);
      EXPECT_EQ(y[2], double(a && b));
      EXPECT_EQ(y[3], double(a && !b));
    }
  }
}

TEST(Dnf, EmptyIsIdentity) {
  DnfSpec dnf;
  dnf.mutually_exclusive = true;
  const auto layers = dnf_layers(dnf, 3, 3);
  EXPECT_EQ(run(layers, {1, 0, 1}), (Vector{1, 0, 1}));
}

TEST(Dnf, RequiresExclusiveClauses) {
  DnfSpec dnf;
  dnf.clauses = {{{0}, {}, {1}}};
  EXPECT_THROW(dnf_layers(dnf, 2, 2), Error);
}

TEST(HalfAdder, TruthTable) {
  const auto layers = half_adder(3, 0, 1);
  EXPECT_EQ(layers.size(), 3U);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Vector y = run(layers, {double(a), double(b), 1.0});
      EXPECT_EQ(y[0], double(a ^ b));
      EXPECT_EQ(y[1], double(a & b));
      EXPECT_EQ(y[2], 1.0);
    }
  }
}

TEST(FullAdder, TruthTable) {
  const auto layers = full_adder(3, 0, 1, 2);
  for (int v = 0; v < 8; ++v) {
    const int a = v & 1, b = (v >> 1) & 1, c = (v >> 2) & 1;
    const Vector y = run(layers, {double(a), double(b), double(c)});
    EXPECT_EQ(y[0], double((a + b + c) & 1)) << v;
    EXPECT_EQ(y[2], double((a + b + c) >> 1)) << v;
    EXPECT_EQ(y[1], 0.0) << v;
  }
}

class RippleAdder : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(RippleAdder, SevenBits) {
  const auto [x, y] = GetParam();
  std::vector<int> xs(7), ys(7);
  std::iota(xs.begin(), xs.end(), 0);
  std::iota(ys.begin(), ys.end(), 7);
  const auto layers = ripple_adder(15, xs, ys, 14);
  EXPECT_EQ(layers.size(), 56U);
  Vector in(15, 0.0);
  const auto xb = bits(x, 7), yb = bits(y, 7);
  for (int i = 0; i < 7; ++i) {
    in[xs[i]] = xb[i];
    in[ys[i]] = yb[i];
  }
  const Vector out = run(layers, in);
  int sum = 0;
  for (int i = 0; i < 7; ++i) sum |= static_cast<int>(out[xs[i]]) << i;
  EXPECT_EQ(sum, (x + y) % 128);
  EXPECT_EQ(out[14], double((x + y) >= 128));
}

INSTANTIATE_TEST_SUITE_P(Cases, RippleAdder,
                         ::testing::Values(std::pair{3, 1}, std::pair{5, 127},
                                           std::pair{127, 1}, std::pair{0, 0},
                                           std::pair{64, 64}));

TEST(RippleAdderExhaustive, ThreeBits) {
  const std::vector<int> xs{0, 1, 2}, ys{3, 4, 5};
  const auto layers = ripple_adder(7, xs, ys, 6);
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      Vector in(7, 0.0);
      for (int i = 0; i < 3; ++i) {
        in[i] = (x >> i) & 1;
        in[3 + i] = (y >> i) & 1;
      }
      const Vector out = run(layers, in);
      EXPECT_EQ(out[0] + 2 * out[1] + 4 * out[2], (x + y) % 8);
      EXPECT_EQ(out[3] + out[4] + out[5], 0.0);
    }
  }
}

TEST(RippleAdder, OverlappingSlices) {
  const std::vector<int> xs{0, 1}, ys{1, 2};
  try {
    ripple_adder(4, xs, ys, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlappingSlices);
  }
}

}  // namespace
}  // namespace tmnet
