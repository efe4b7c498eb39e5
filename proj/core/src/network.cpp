#include "tmnet/network.hpp"

#include <fmt/format.h>

#include "tmnet/error.hpp"

namespace tmnet {

namespace {

void check_linear(const LinearLayer& l) {
  if (l.bias.size() != l.weight.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("linear layer: {} rows but {} biases",
                            l.weight.rows(), l.bias.size()));
  }
  if (l.activation.kind == Activation::Kind::kSoftmaxRow) {
    throw Error(ErrorCode::kInvalidArgument,
                "linear layers take relu, satlin or identity");
  }
}

void check_attention(const AttentionLayer& a) {
  const std::size_t s = a.query.rows();
  const bool ok = a.query_bias.size() == s && a.key.rows() == s &&
                  a.key_bias.size() == s && a.null_key.size() == s &&
                  a.value_bias.size() == a.value.rows() &&
                  a.null_value.size() == a.value.rows() &&
                  a.value.cols() == a.key.cols() &&
                  a.merge.cols() == a.query.cols() + a.value.rows() &&
                  (a.source == AttentionLayer::Source::kCross ||
                   a.key.cols() == a.query.cols());
  if (!ok) {
    throw Error(ErrorCode::kDimensionMismatch,
                "attention layer projections are inconsistent");
  }
  if (!(a.gain > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "attention gain must be positive");
  }
}

}  // namespace

std::size_t Layer::in_width() const {
  return std::visit([](const auto& l) { return l.in_width(); }, op);
}

std::size_t Layer::out_width() const {
  return std::visit([](const auto& l) { return l.out_width(); }, op);
}

void Network::append(Layer layer) {
  if (const auto* lin = std::get_if<LinearLayer>(&layer.op)) {
    check_linear(*lin);
  } else {
    check_attention(std::get<AttentionLayer>(layer.op));
  }
  if (layer.in_width() != output_width()) {
    throw Error(ErrorCode::kWidthMismatch,
                fmt::format("layer '{}'[{}] takes width {}, network provides {}",
                            layer.role, layer.block, layer.in_width(),
                            output_width()));
  }
  layers_.push_back(std::move(layer));
}

void Network::append(std::string role, int block, LinearLayer layer) {
  append(Layer{std::move(role), block, std::move(layer)});
}

void Network::append(std::string role, int block, AttentionLayer layer) {
  append(Layer{std::move(role), block, std::move(layer)});
}

std::size_t Network::output_width() const {
  return layers_.empty() ? input_width_ : layers_.back().out_width();
}

std::size_t Network::num_self_attention() const {
  std::size_t n = 0;
  for (const auto& l : layers_) {
    if (const auto* a = std::get_if<AttentionLayer>(&l.op)) {
      n += a->source == AttentionLayer::Source::kSelf;
    }
  }
  return n;
}

Vector attend(const AttentionLayer& layer, std::span<const double> query_vec,
              const Matrix& memory) {
  const std::size_t n = memory.rows();
  if (n > 0 && memory.cols() != layer.memory_width()) {
    throw Error(ErrorCode::kWidthMismatch,
                fmt::format("attention memory has width {}, keys expect {}",
                            memory.cols(), layer.memory_width()));
  }
  const Vector q = affine(layer.query, layer.query_bias, query_vec);
  auto dot = [](std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };

  Vector scores(n + 1);
  std::vector<Vector> values;
  values.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector k = affine(layer.key, layer.key_bias, memory.row(i));
    scores[i] = dot(q, k);
    values.push_back(affine(layer.value, layer.value_bias, memory.row(i)));
  }
  scores[n] = dot(q, layer.null_key);
  values.push_back(layer.null_value);

  const Vector weights = softmax(scores, layer.gain);
  Vector out(layer.value_width(), 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    if (weights[i] == 0.0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] += weights[i] * values[i][j];
    }
  }
  return out;
}

Vector apply_attention(const AttentionLayer& layer, std::span<const double> x,
                       const Matrix& memory) {
  Vector joined(x.begin(), x.end());
  const Vector a = attend(layer, x, memory);
  joined.insert(joined.end(), a.begin(), a.end());
  return matvec(layer.merge, joined);
}

Vector apply_linear(const LinearLayer& layer, std::span<const double> x) {
  return activate(layer.activation, affine(layer.weight, layer.bias, x));
}

History::History(const Network& network) {
  for (const auto& l : network.layers()) {
    if (const auto* a = std::get_if<AttentionLayer>(&l.op)) {
      if (a->source == AttentionLayer::Source::kSelf) {
        memories_.emplace_back(0, a->in_width());
      }
    }
  }
}

void History::append(const StepResult& step) {
  if (step.self_attention_inputs.size() != memories_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "step result does not match history layers");
  }
  for (std::size_t i = 0; i < memories_.size(); ++i) {
    memories_[i].append_row(step.self_attention_inputs[i]);
  }
  ++size_;
}

StepResult forward_step(const Network& network, std::span<const double> state,
                        const History& history, const Matrix& encoder,
                        const LayerObserver& observer) {
  if (state.size() != network.input_width()) {
    throw Error(ErrorCode::kWidthMismatch,
                fmt::format("state has width {}, network expects {}",
                            state.size(), network.input_width()));
  }
  StepResult result;
  Vector x(state.begin(), state.end());
  std::size_t self_index = 0;
  const auto& layers = network.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& layer = layers[i];
    if (const auto* lin = std::get_if<LinearLayer>(&layer.op)) {
      x = apply_linear(*lin, x);
    } else {
      const auto& att = std::get<AttentionLayer>(layer.op);
      if (att.source == AttentionLayer::Source::kSelf) {
        result.self_attention_inputs.push_back(x);
        static const Matrix kEmpty;
        const Matrix& memory = self_index < history.num_layers()
                                   ? history.memory(self_index)
                                   : kEmpty;
        x = apply_attention(att, x, memory);
        ++self_index;
      } else {
        x = apply_attention(att, x, encoder);
      }
    }
    if (observer) observer(i, layer, x);
  }
  result.output = std::move(x);
  return result;
}

Vector forward(const Network& network, std::span<const double> x,
               const LayerObserver& observer) {
  for (const auto& l : network.layers()) {
    if (l.is_attention()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "forward() is for feedforward networks");
    }
  }
  static const Matrix kNoEncoder;
  return forward_step(network, x, History(network), kNoEncoder, observer)
      .output;
}

}  // namespace tmnet
