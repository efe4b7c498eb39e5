#include "tmnet/ss.hpp"

#include <fmt/format.h>

#include "tmnet/error.hpp"

namespace tmnet {

namespace {

constexpr double kRoutingTolerance = 1e-9;
// Gain on the detector term of the 1-layer update. It must exceed the
// largest value term an inactive combo can produce (about 330 at b = 40).
constexpr double kGateGain = 1024.0;
constexpr int kDecodeLimit = 64;

int op_index(int stack, StackOp op) {
  return kNumStackOps * stack + static_cast<int>(op);
}

// Rule applied in every combo: terminal combos keep their state.
StackRule target_rule(const StackMachine& m, int combo) {
  if (auto r = m.effective_rule(combo)) return *r;
  const int q = m.combo_state(combo);
  if (m.is_terminal(q)) {
    return StackRule{q, std::vector<StackOp>(m.num_stacks(), StackOp::kNoop)};
  }
  throw Error(ErrorCode::kUndefinedTransition,
              fmt::format("no rule for combo {} of state '{}'", combo,
                          m.states()[q]));
}

LinearLayer satlin_layer(int in, int out) {
  LinearLayer l;
  l.weight = Matrix(out, in);
  l.bias.assign(out, 0.0);
  l.activation = Activation::satlin();
  return l;
}

// Index map of the 1-layer state vector. Gating indicators precede the
// constant and the values, so each update row first sums its exact integer
// gate and only then adds the real-valued terms.
struct Augmented {
  int combos;
  int states;
  int p;

  int P(int c) const { return c; }
  int I(int q) const { return combos + q; }
  int NEc(int c, int i) const { return combos + states + c * p + i; }
  int T1c(int c, int i) const {
    return combos + states + combos * p + c * p + i;
  }
  int INE(int i) const { return combos + states + 2 * combos * p + i; }
  int IT1(int i) const { return INE(0) + p + i; }
  int one() const { return INE(0) + 2 * p; }
  int U(int c, int i) const { return one() + 1 + c * p + i; }
  int IU(int i) const { return one() + 1 + combos * p + i; }
  int width() const { return IU(0) + p; }
};

Augmented augmented(const StackMachine& m) {
  return {m.num_combos(), m.num_states(), m.num_stacks()};
}

SsNetwork prepare(const StackMachine& machine, SsVariant variant, int base) {
  SsNetwork net;
  net.variant = variant;
  int reject = -1;
  net.machine = machine.with_reject("reject", &reject);
  if (!machine.reject()) net.synthesized_reject = reject;
  net.codec = CantorCodec(base);
  net.routing = solve_routing(net.machine);
  return net;
}

Network build_four_layer(const SsNetwork& net) {
  const StackMachine& m = net.machine;
  const CantorCodec& codec = net.codec;
  const int q = m.num_states();
  const int p = m.num_stacks();
  const int c = m.num_combos();
  const double b = codec.base();
  const double d0 = codec.digit(0);
  const double d1 = codec.digit(1);

  Network network(q + p);
  auto detector = build_detector(m, codec);
  network.append("top_bits", 0, std::move(detector[0]));
  network.append("detector", 0, std::move(detector[1]));

  // F2: [d | top | v] -> [beta d | gated candidates].
  LinearLayer apply = satlin_layer(c + 2 * p, q + kNumStackOps * p);
  for (int s = 0; s < q; ++s) {
    for (int k = 0; k < c; ++k) apply.weight(s, k) = net.routing.beta(s, k);
  }
  for (int i = 0; i < p; ++i) {
    const int top = c + i;
    const int v = c + p + i;
    for (int o = 0; o < kNumStackOps; ++o) {
      const auto op = static_cast<StackOp>(o);
      const int row = q + op_index(i, op);
      for (int k = 0; k < c; ++k) {
        apply.weight(row, k) = net.routing.gamma(op_index(i, op), k);
      }
      apply.bias[row] = -1.0;
      switch (op) {
        case StackOp::kNoop:
          apply.weight(row, v) = 1.0;
          break;
        case StackOp::kPush0:
        case StackOp::kPush1:
          apply.weight(row, v) = 1.0 / b;
          apply.bias[row] += codec.digit(op == StackOp::kPush1) / b;
          break;
        case StackOp::kPop:
          apply.weight(row, v) = b;
          apply.weight(row, top) = -(d1 - d0);
          apply.bias[row] -= d0;
          break;
      }
    }
  }
  network.append("apply", 0, std::move(apply));

  // F1: [beta d | gated] -> [st | v].
  LinearLayer join = satlin_layer(q + kNumStackOps * p, q + p);
  for (int s = 0; s < q; ++s) join.weight(s, s) = 1.0;
  for (int i = 0; i < p; ++i) {
    for (int o = 0; o < kNumStackOps; ++o) {
      join.weight(q + i, q + kNumStackOps * i + o) = 1.0;
    }
  }
  network.append("reassemble", 0, std::move(join));
  return network;
}

Network build_one_layer(const SsNetwork& net) {
  const StackMachine& m = net.machine;
  const CantorCodec& codec = net.codec;
  const Augmented z = augmented(m);
  const Matrix& beta = net.routing.beta;
  const double b = codec.base();
  const double k = kGateGain;

  // Thresholds on a popped value y: satlin(M (y - theta) + 1/2) with M
  // twice the inverse half-gap, so both sides clear the clamp by 1/2.
  const double theta_e = codec.empty_threshold();
  const double theta_t = codec.top_threshold();
  const double m_e = 2.0 / theta_e;
  const double m_t = 2.0 / (theta_t - (codec.digit(0) + 1.0) / b);

  LinearLayer l = satlin_layer(z.width(), z.width());
  auto add_state = [&](int row, int s, double coef) {
    for (int c = 0; c < z.combos; ++c) {
      if (beta(s, c) != 0.0) l.weight(row, z.P(c)) += coef * beta(s, c);
    }
    l.weight(row, z.I(s)) += coef;
  };
  auto add_ne = [&](int row, int i, double coef) {
    for (int c = 0; c < z.combos; ++c) l.weight(row, z.NEc(c, i)) += coef;
    l.weight(row, z.INE(i)) += coef;
  };
  auto add_t1 = [&](int row, int i, double coef) {
    for (int c = 0; c < z.combos; ++c) l.weight(row, z.T1c(c, i)) += coef;
    l.weight(row, z.IT1(i)) += coef;
  };
  auto add_v = [&](int row, int i, double coef) {
    for (int c = 0; c < z.combos; ++c) l.weight(row, z.U(c, i)) += coef;
    l.weight(row, z.IU(i)) += coef;
  };
  // gain * (S_q + sum_i L_i - (p + 1)): 0 when the combo matches, at most
  // -gain otherwise.
  auto add_gate = [&](int row, int combo, double gain) {
    add_state(row, m.combo_state(combo), gain);
    const auto tops = m.combo_tops(combo);
    l.bias[row] -= gain * (z.p + 1);
    for (int i = 0; i < z.p; ++i) {
      switch (tops[i]) {
        case Top::kEmpty:
          l.bias[row] += gain;
          add_ne(row, i, -gain);
          break;
        case Top::kZero:
          add_ne(row, i, gain);
          add_t1(row, i, -gain);
          break;
        case Top::kOne:
          add_t1(row, i, gain);
          break;
      }
    }
  };

  for (int c = 0; c < z.combos; ++c) {
    add_gate(z.P(c), c, 1.0);
    l.bias[z.P(c)] += 1.0;

    const StackRule rule = target_rule(m, c);
    const auto tops = m.combo_tops(c);
    for (int i = 0; i < z.p; ++i) {
      const int ne = z.NEc(c, i);
      const int t1 = z.T1c(c, i);
      const int u = z.U(c, i);
      add_gate(ne, c, k);
      add_gate(t1, c, k);
      add_gate(u, c, k);
      switch (rule.ops[i]) {
        case StackOp::kNoop:
          l.bias[ne] += tops[i] != Top::kEmpty ? 1.0 : 0.0;
          l.bias[t1] += tops[i] == Top::kOne ? 1.0 : 0.0;
          add_v(u, i, 1.0);
          break;
        case StackOp::kPush0:
        case StackOp::kPush1: {
          const int bit = rule.ops[i] == StackOp::kPush1;
          l.bias[ne] += 1.0;
          l.bias[t1] += bit;
          l.weight(u, z.one()) += codec.digit(bit) / b;
          add_v(u, i, 1.0 / b);
          break;
        }
        case StackOp::kPop: {
          // y = b v - d(top), with the top known from the combo.
          const double d = codec.digit(tops[i] == Top::kOne);
          l.weight(ne, z.one()) += -m_e * (d + theta_e) + 0.5;
          add_v(ne, i, m_e * b);
          l.weight(t1, z.one()) += -m_t * (d + theta_t) + 0.5;
          add_v(t1, i, m_t * b);
          l.bias[u] -= d;
          add_v(u, i, b);
          break;
        }
      }
    }
  }
  l.bias[z.one()] = 1.0;

  Network network(z.width());
  network.append("step", 0, std::move(l));
  return network;
}

}  // namespace

RoutingWeights solve_routing(const StackMachine& m) {
  const int q = m.num_states();
  const int p = m.num_stacks();
  const int c = m.num_combos();
  const int ops = kNumStackOps * p;

  Matrix design = Matrix::identity(c);
  Matrix targets(c, q + ops);
  for (int k = 0; k < c; ++k) {
    const StackRule rule = target_rule(m, k);
    targets(k, rule.next) = 1.0;
    for (int i = 0; i < p; ++i) targets(k, q + op_index(i, rule.ops[i])) = 1.0;
  }
  const LstsqResult fit = lstsq(design, targets);
  if (!(fit.residual < kRoutingTolerance)) {
    throw Error(ErrorCode::kResidualTooLarge,
                fmt::format("routing residual {} exceeds {}", fit.residual,
                            kRoutingTolerance));
  }

  RoutingWeights w;
  w.residual = fit.residual;
  w.beta = Matrix(q, c);
  w.gamma = Matrix(ops, c);
  for (int k = 0; k < c; ++k) {
    for (int s = 0; s < q; ++s) w.beta(s, k) = fit.solution(k, s);
    for (int o = 0; o < ops; ++o) w.gamma(o, k) = fit.solution(k, q + o);
  }
  // A detector one-hot picks one column; it must be the target verbatim.
  for (int k = 0; k < c; ++k) {
    for (int j = 0; j < q + ops; ++j) {
      const double got = j < q ? w.beta(j, k) : w.gamma(j - q, k);
      if (got != targets(k, j)) {
        throw Error(ErrorCode::kResidualTooLarge,
                    fmt::format("routing column {} is not exact", k));
      }
    }
  }
  return w;
}

std::vector<LinearLayer> build_detector(const StackMachine& m,
                                        const CantorCodec& codec) {
  const int q = m.num_states();
  const int p = m.num_stacks();
  const int c = m.num_combos();
  const double b = codec.base();
  const double gap = codec.digit(1) - codec.digit(0) - 1.0;

  // F4: [st | v] -> [st | top | ne | v].
  LinearLayer read = satlin_layer(q + p, q + 3 * p);
  for (int s = 0; s < q; ++s) read.weight(s, s) = 1.0;
  for (int i = 0; i < p; ++i) {
    const int v = q + i;
    read.weight(q + i, v) = b / gap;
    read.bias[q + i] = -(codec.digit(0) + 1.0) / gap;
    read.weight(q + p + i, v) = b;
    read.weight(q + 2 * p + i, v) = 1.0;
  }

  // F3: d_combo = satlin(st_q + sum_i L_i - p) with L = 1 - ne (empty),
  // ne - top (top 0) or top (top 1); top and v pass through.
  LinearLayer detect = satlin_layer(q + 3 * p, c + 2 * p);
  for (int k = 0; k < c; ++k) {
    detect.weight(k, m.combo_state(k)) = 1.0;
    detect.bias[k] = -static_cast<double>(p);
    const auto tops = m.combo_tops(k);
    for (int i = 0; i < p; ++i) {
      const int top = q + i;
      const int ne = q + p + i;
      switch (tops[i]) {
        case Top::kEmpty:
          detect.weight(k, ne) = -1.0;
          detect.bias[k] += 1.0;
          break;
        case Top::kZero:
          detect.weight(k, ne) = 1.0;
          detect.weight(k, top) = -1.0;
          break;
        case Top::kOne:
          detect.weight(k, top) = 1.0;
          break;
      }
    }
  }
  for (int i = 0; i < p; ++i) {
    detect.weight(c + i, q + i) = 1.0;
    detect.weight(c + p + i, q + 2 * p + i) = 1.0;
  }
  return {std::move(read), std::move(detect)};
}

Vector SsNetwork::encode_state(const StackConfiguration& c) const {
  const int q = machine.num_states();
  const int p = machine.num_stacks();
  if (c.state < 0 || c.state >= q || static_cast<int>(c.stacks.size()) != p) {
    throw Error(ErrorCode::kInvalidArgument,
                "configuration does not fit the compiled machine");
  }
  if (variant == SsVariant::kFourLayer) {
    Vector x(q + p, 0.0);
    x[c.state] = 1.0;
    for (int i = 0; i < p; ++i) x[q + i] = codec.encode(c.stacks[i]);
    return x;
  }
  const Augmented z = augmented(machine);
  Vector x(z.width(), 0.0);
  x[z.I(c.state)] = 1.0;
  x[z.one()] = 1.0;
  for (int i = 0; i < p; ++i) {
    const auto& s = c.stacks[i];
    x[z.INE(i)] = s.empty() ? 0.0 : 1.0;
    x[z.IT1(i)] = !s.empty() && s.front() == 1 ? 1.0 : 0.0;
    x[z.IU(i)] = codec.encode(s);
  }
  return x;
}

StackConfiguration SsNetwork::decode_state(const Vector& x) const {
  const int q = machine.num_states();
  const int p = machine.num_stacks();
  Vector state(q, 0.0);
  Vector values(p, 0.0);
  if (variant == SsVariant::kFourLayer) {
    for (int s = 0; s < q; ++s) state[s] = x[s];
    for (int i = 0; i < p; ++i) values[i] = x[q + i];
  } else {
    const Augmented z = augmented(machine);
    for (int s = 0; s < q; ++s) {
      double acc = x[z.I(s)];
      for (int c = 0; c < z.combos; ++c) acc += routing.beta(s, c) * x[z.P(c)];
      state[s] = acc;
    }
    for (int i = 0; i < p; ++i) {
      double acc = x[z.IU(i)];
      for (int c = 0; c < z.combos; ++c) acc += x[z.U(c, i)];
      values[i] = acc;
    }
  }

  StackConfiguration out;
  out.state = -1;
  for (int s = 0; s < q; ++s) {
    if (state[s] == 1.0 && out.state < 0) {
      out.state = s;
    } else if (state[s] != 0.0) {
      out.state = -2;
      break;
    }
  }
  if (out.state < 0) {
    throw Error(ErrorCode::kNonBinaryActivation,
                "state units are not exactly one-hot");
  }
  for (int i = 0; i < p; ++i) {
    out.stacks.push_back(codec.decode(values[i], kDecodeLimit));
  }
  return out;
}

SsNetwork compile4(const StackMachine& machine) {
  SsNetwork net = prepare(machine, SsVariant::kFourLayer, 4);
  net.step_net = build_four_layer(net);
  return net;
}

SsNetwork compile1(const StackMachine& machine) {
  const int p = machine.num_stacks();
  if (p != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("1-layer variant needs 2 stacks, got {}", p));
  }
  SsNetwork net = prepare(machine, SsVariant::kOneLayer, 10 * p * p);
  net.step_net = build_one_layer(net);
  return net;
}

SsNetwork ss_from_network(const StackMachine& machine, SsVariant variant,
                          Network step_net) {
  const int base = variant == SsVariant::kFourLayer
                       ? 4
                       : 10 * machine.num_stacks() * machine.num_stacks();
  SsNetwork net = prepare(machine, variant, base);
  const std::size_t width =
      variant == SsVariant::kFourLayer
          ? static_cast<std::size_t>(net.machine.num_states() +
                                     net.machine.num_stacks())
          : static_cast<std::size_t>(augmented(net.machine).width());
  if (step_net.input_width() != width || step_net.output_width() != width) {
    throw Error(ErrorCode::kWidthMismatch,
                fmt::format("network maps {} -> {}, machine needs width {}",
                            step_net.input_width(), step_net.output_width(),
                            width));
  }
  net.step_net = std::move(step_net);
  return net;
}

StackTrace simulate(const SsNetwork& net, const StackConfiguration& c0,
                    int max_steps) {
  if (max_steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 0");
  }
  const StackMachine& m = net.machine;
  StackTrace trace;
  trace.configs.push_back(c0);
  Vector x = net.encode_state(c0);
  while (true) {
    const StackConfiguration& cur = trace.configs.back();
    if (m.is_terminal(cur.state)) {
      trace.outcome = {Outcome::Kind::kHalted, cur.state, -1};
      break;
    }
    if (cur.step - c0.step >= max_steps) {
      trace.outcome = {Outcome::Kind::kStepLimitExceeded, -1, -1};
      break;
    }
    x = forward(net.step_net, x);
    StackConfiguration next = net.decode_state(x);
    next.step = cur.step + 1;
    if (net.synthesized_reject && next.state == *net.synthesized_reject) {
      std::vector<Top> tops;
      for (const auto& s : cur.stacks) tops.push_back(classify(s));
      trace.outcome = {Outcome::Kind::kUndefinedTransition, cur.state,
                       m.combo_index(cur.state, tops)};
      break;
    }
    trace.configs.push_back(std::move(next));
  }
  return trace;
}

}  // namespace tmnet
