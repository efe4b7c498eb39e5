#pragma once

// Stacks of bits as numbers in [0, 1). A stack a_1 a_2 ... a_n (a_1 on top)
// encodes to sum_i d(a_i) / b^i with digit d(a) = b - 1 + 4 rho (a - 1).
// Push and pop are affine in the encoded value once the top is known.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tmnet {

class CantorCodec {
 public:
  // Throws kInvalidArgument unless b >= 4 and 1/4 < rho <= (b - 1) / 4,
  // which keeps the top-0 and top-1 intervals disjoint.
  explicit CantorCodec(int b, double rho = 0.5);

  int base() const { return b_; }
  double rho() const { return rho_; }
  double digit(int bit) const { return bit == 0 ? d0_ : d1_; }

  double encode(std::span<const int> stack) const;
  // Peels at most `max_len` bits. Throws kValueOutOfRange unless
  // 0 <= v < 1.
  std::vector<int> decode(double v, int max_len = 64) const;

  double push(double v, int bit) const;
  // Throws kPopOnEmpty when v decodes as empty.
  double pop(double v) const;
  // Top bit of a nonempty encoding.
  int top(double v) const;
  bool empty(double v) const { return v < empty_threshold(); }

  // Neuron forms used by the compiled networks.
  // satlin(b v): 1 on any nonempty encoding, 0 on the empty stack.
  double nonempty(double v) const;
  // satlin((b v - d0 - 1) / (d1 - d0 - 1)): 0 on the top-0 interval,
  // 1 on the top-1 interval.
  double top_neuron(double v) const;

  // Half the smallest nonempty encoding, d0 / (2b).
  double empty_threshold() const { return d0_ / (2.0 * b_); }
  // Midpoint of the gap between the top-0 interval [d0/b, (d0+1)/b) and
  // the top-1 interval [d1/b, (d1+1)/b).
  double top_threshold() const { return (d0_ + 1.0 + d1_) / (2.0 * b_); }

 private:
  int b_;
  double rho_;
  double d0_;
  double d1_;
};

struct PrecisionRow {
  int pops = 0;
  // Worst |v_k - encode(remaining stack)| over all trial stacks.
  double max_error = 0.0;
  // Trials whose top bit read before the k-th pop was wrong.
  int flips = 0;
};

struct PrecisionReport {
  int base = 0;
  int stacks = 0;
  std::vector<PrecisionRow> rows;  // rows[k] for k = 0..max_pops
  std::optional<int> first_flip;
};

// Pushes `max_pops` random bits onto each of `stacks` empty stacks, then
// pops them one by one, reading each top from the running value as a
// network would.
PrecisionReport precision_probe(int b, int max_pops, int stacks = 1000,
                                std::uint64_t seed = 1);

}  // namespace tmnet
