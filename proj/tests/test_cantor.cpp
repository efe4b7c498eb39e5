#include <gtest/gtest.h>

#include <random>

#include "tmnet/cantor.hpp"
#include "tmnet/error.hpp"

namespace tmnet {
namespace {

TEST(Cantor, Encode) {
  const CantorCodec c(4);
  EXPECT_EQ(c.encode(std::vector<int>{}), 0.0);
  EXPECT_EQ(c.encode(std::vector<int>{1}), 0.75);
  EXPECT_EQ(c.encode(std::vector<int>{0, 1}), 0.4375);
}

TEST(Cantor, Decode) {
  const CantorCodec c(4);
  EXPECT_TRUE(c.decode(0.0).empty());
  EXPECT_EQ(c.decode(0.75), (std::vector<int>{1}));
  EXPECT_EQ(c.decode(0.4375), (std::vector<int>{0, 1}));
  EXPECT_THROW(c.decode(1.0), Error);
  EXPECT_THROW(c.decode(-0.1), Error);
}

TEST(Cantor, StackAlgebra) {
  const CantorCodec c(4);
  EXPECT_EQ(c.push(0.75, 0), 0.4375);
  EXPECT_EQ(c.pop(0.4375), 0.75);
  EXPECT_EQ(c.top(0.4375), 0);
  EXPECT_EQ(c.top(0.75), 1);
  EXPECT_EQ(c.top_neuron(0.4375), 0.0);
  EXPECT_EQ(c.top_neuron(0.75), 1.0);
  EXPECT_EQ(c.nonempty(0.0), 0.0);
  EXPECT_EQ(c.nonempty(0.25), 1.0);
  EXPECT_TRUE(c.empty(0.0));
  EXPECT_FALSE(c.empty(0.25));
}

TEST(Cantor, PopOnEmpty) {
  try {
    CantorCodec(4).pop(0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPopOnEmpty);
  }
}

TEST(Cantor, InvalidParameters) {
  EXPECT_THROW(CantorCodec(3), Error);
  EXPECT_THROW(CantorCodec(4, 0.25), Error);
  EXPECT_THROW(CantorCodec(4, 1.0), Error);
  EXPECT_NO_THROW(CantorCodec(4, 0.75));
}

TEST(Cantor, Thresholds) {
  const CantorCodec c(40);
  EXPECT_EQ(c.digit(0), 37.0);
  EXPECT_EQ(c.digit(1), 39.0);
  EXPECT_DOUBLE_EQ(c.empty_threshold(), 0.4625);
  EXPECT_DOUBLE_EQ(c.top_threshold(), 0.9625);
}

TEST(Cantor, RoundTripRandomStacks) {
  std::mt19937_64 rng(5);
  const CantorCodec c(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> s(rng() % 20);
    for (int& bit : s) bit = static_cast<int>(rng() & 1);
    EXPECT_EQ(c.decode(c.encode(s)), s);
  }
}

TEST(Precision, BaseFourHasNoFlips) {
  const PrecisionReport r = precision_probe(4, 20);
  EXPECT_FALSE(r.first_flip.has_value());
  EXPECT_EQ(r.rows.size(), 21U);
  for (const PrecisionRow& row : r.rows) EXPECT_EQ(row.flips, 0);
}

TEST(Precision, ZeroPopsIsExact) {
  EXPECT_EQ(precision_probe(40, 3).rows[0].max_error, 0.0);
}

TEST(Precision, BaseFortyReliableThroughNine) {
  const PrecisionReport r = precision_probe(40, 15);
  for (int k = 0; k <= 9; ++k) EXPECT_EQ(r.rows[k].flips, 0) << k;
  ASSERT_TRUE(r.first_flip.has_value());
  EXPECT_GE(*r.first_flip, 10);
  EXPECT_LE(*r.first_flip, 11);
}

}  // namespace
}  // namespace tmnet
