#pragma once

// Layer graph for compiled networks and its forward pass.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tmnet/linalg.hpp"

namespace tmnet {

inline constexpr double kHardAttentionGain = 9999.0;

struct LinearLayer {
  Matrix weight;
  Vector bias;
  Activation activation = Activation::relu();

  std::size_t in_width() const { return weight.cols(); }
  std::size_t out_width() const { return weight.rows(); }

  friend bool operator==(const LinearLayer&, const LinearLayer&) = default;
};

// Single-head attention with an always-present null row:
//
//   q = Wq x + bq,  k_i = Wk m_i + bk,  v_i = Wv m_i + bv
//   a = sum_i softmax(gain * [q.k_1 ... q.k_n, q.null_key])_i * v_i
//       (the null row contributes null_value)
//   y = merge [x ; a]
//
// Self-attention draws m_i from the decoder history, cross-attention from
// the encoder matrix.
struct AttentionLayer {
  enum class Source { kSelf, kCross };

  Source source = Source::kSelf;
  Matrix query;
  Vector query_bias;
  Matrix key;
  Vector key_bias;
  Matrix value;
  Vector value_bias;
  Vector null_key;
  Vector null_value;
  double gain = kHardAttentionGain;
  Matrix merge;

  std::size_t in_width() const { return query.cols(); }
  std::size_t out_width() const { return merge.rows(); }
  std::size_t memory_width() const { return key.cols(); }
  std::size_t score_width() const { return query.rows(); }
  std::size_t value_width() const { return value.rows(); }

  friend bool operator==(const AttentionLayer&,
                         const AttentionLayer&) = default;
};

struct Layer {
  // Free-form stage name ("transition", "full_adder", ...) and the index
  // of the block within that stage; used for census and diagnostics.
  std::string role;
  int block = 0;
  std::variant<LinearLayer, AttentionLayer> op;

  std::size_t in_width() const;
  std::size_t out_width() const;
  bool is_attention() const {
    return std::holds_alternative<AttentionLayer>(op);
  }

  friend bool operator==(const Layer&, const Layer&) = default;
};

class Network {
 public:
  Network() = default;
  explicit Network(std::size_t input_width) : input_width_(input_width) {}

  // Throws kWidthMismatch if the layer does not accept the current output
  // width, or kDimensionMismatch if its own shapes are inconsistent.
  void append(Layer layer);
  void append(std::string role, int block, LinearLayer layer);
  void append(std::string role, int block, AttentionLayer layer);

  std::size_t input_width() const { return input_width_; }
  std::size_t output_width() const;
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t num_self_attention() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::size_t input_width_ = 0;
  std::vector<Layer> layers_;
};

// Output of one attention read, before the merge.
Vector attend(const AttentionLayer& layer, std::span<const double> query_vec,
              const Matrix& memory);

// merge [x ; attend(x, memory)]
Vector apply_attention(const AttentionLayer& layer, std::span<const double> x,
                       const Matrix& memory);

Vector apply_linear(const LinearLayer& layer, std::span<const double> x);

struct StepResult {
  Vector output;
  // Input seen by each self-attention layer, in layer order. Appending
  // these to the history makes them attendable by later positions.
  std::vector<Vector> self_attention_inputs;
};

// Causal decoder memory: for self-attention layer j, row t is the input
// that layer received at position t.
class History {
 public:
  History() = default;
  explicit History(const Network& network);

  void append(const StepResult& step);
  const Matrix& memory(std::size_t self_attention_index) const {
    return memories_.at(self_attention_index);
  }
  std::size_t size() const { return size_; }
  std::size_t num_layers() const { return memories_.size(); }

 private:
  std::vector<Matrix> memories_;
  std::size_t size_ = 0;
};

using LayerObserver = std::function<void(
    std::size_t layer_index, const Layer& layer, std::span<const double> out)>;

// One decoder position: threads `state` through every layer. Self-attention
// layers read `history`, cross-attention layers read `encoder`. Pure.
// Throws kWidthMismatch when `state` does not match the input width.
StepResult forward_step(const Network& network, std::span<const double> state,
                        const History& history, const Matrix& encoder,
                        const LayerObserver& observer = {});

// Feedforward-only convenience; throws kInvalidArgument on attention layers.
Vector forward(const Network& network, std::span<const double> x,
               const LayerObserver& observer = {});

}  // namespace tmnet
