#include "tmnet/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "tmnet/error.hpp"

namespace tmnet {

namespace {

double satlin(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

CantorCodec::CantorCodec(int b, double rho) : b_(b), rho_(rho) {
  if (b < 4) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("base must be at least 4, got {}", b));
  }
  if (!(rho > 0.25) || rho > (b - 1) / 4.0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("rho {} out of range for base {}", rho, b));
  }
  d0_ = b - 1 - 4.0 * rho;
  d1_ = b - 1.0;
}

double CantorCodec::encode(std::span<const int> stack) const {
  double v = 0.0;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) v = push(v, *it);
  return v;
}

std::vector<int> CantorCodec::decode(double v, int max_len) const {
  if (!(v >= 0.0 && v < 1.0)) {
    throw Error(ErrorCode::kValueOutOfRange,
                fmt::format("{} is not a stack encoding", v));
  }
  std::vector<int> bits;
  while (static_cast<int>(bits.size()) < max_len && !empty(v)) {
    const int bit = top(v);
    bits.push_back(bit);
    v = b_ * v - digit(bit);
  }
  return bits;
}

double CantorCodec::push(double v, int bit) const {
  return (v + digit(bit)) / b_;
}

double CantorCodec::pop(double v) const {
  if (empty(v)) {
    throw Error(ErrorCode::kPopOnEmpty, "pop on an empty encoding");
  }
  return b_ * v - digit(top(v));
}

int CantorCodec::top(double v) const { return v >= top_threshold() ? 1 : 0; }

double CantorCodec::nonempty(double v) const { return satlin(b_ * v); }

double CantorCodec::top_neuron(double v) const {
  return satlin((b_ * v - d0_ - 1.0) / (d1_ - d0_ - 1.0));
}

PrecisionReport precision_probe(int b, int max_pops, int stacks,
                                std::uint64_t seed) {
  if (max_pops < 0 || stacks < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "need max_pops >= 0 and at least one stack");
  }
  const CantorCodec codec(b);
  PrecisionReport report;
  report.base = b;
  report.stacks = stacks;
  report.rows.resize(max_pops + 1);
  for (int k = 0; k <= max_pops; ++k) report.rows[k].pops = k;

  std::mt19937_64 rng(seed);
  std::vector<int> bits(max_pops);
  // suffix[k] = encode(bits[k..]), built by the same pushes.
  std::vector<double> suffix(max_pops + 1);
  for (int trial = 0; trial < stacks; ++trial) {
    for (int& bit : bits) bit = static_cast<int>(rng() & 1U);
    suffix[max_pops] = 0.0;
    for (int k = max_pops - 1; k >= 0; --k) {
      suffix[k] = codec.push(suffix[k + 1], bits[k]);
    }
    double v = suffix[0];
    for (int k = 1; k <= max_pops; ++k) {
      const int read = codec.top(v);
      if (read != bits[k - 1]) ++report.rows[k].flips;
      v = b * v - codec.digit(read);
      PrecisionRow& row = report.rows[k];
      row.max_error = std::max(row.max_error, std::abs(v - suffix[k]));
    }
  }
  for (const auto& row : report.rows) {
    if (row.flips > 0) {
      report.first_flip = row.pops;
      break;
    }
  }
  return report;
}

}  // namespace tmnet
