#include "tmnet/wcm.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "tmnet/circuits.hpp"
#include "tmnet/error.hpp"

namespace tmnet {

namespace {

constexpr double kAttentionTolerance = 1e-9;

// One compared bit. A negative query index stands for the constant 1.
struct Match {
  int query;
  int key;
};

// Hard-attention lookup over binary fields. Query bits map to 2x - 1 and
// key bits to y - 1/2, so a row scores m/2 minus its number of mismatches.
// An extra score dimension lets the null row score m/2 - 1/2: a perfect
// match beats it by 1/2 and any mismatch loses to it by at least 1/2.
//
// The value is the listed memory dims, or the constant 1 when none are
// given. Each attended component replaces the matching `targets` dim.
AttentionLayer match_layer(AttentionLayer::Source source, int width,
                           int memory_width, const std::vector<Match>& terms,
                           const std::vector<int>& value_dims,
                           const std::vector<int>& targets) {
  const int m = static_cast<int>(terms.size());
  const int s = m + 1;
  const int v = value_dims.empty() ? 1 : static_cast<int>(value_dims.size());

  AttentionLayer a;
  a.source = source;
  a.query = Matrix(s, width);
  a.query_bias.assign(s, 0.0);
  a.key = Matrix(s, memory_width);
  a.key_bias.assign(s, 0.0);
  for (int i = 0; i < m; ++i) {
    if (terms[i].query >= 0) {
      a.query(i, terms[i].query) = 2.0;
      a.query_bias[i] = -1.0;
    } else {
      a.query_bias[i] = 1.0;
    }
    a.key(i, terms[i].key) = 1.0;
    a.key_bias[i] = -0.5;
  }
  a.query_bias[m] = 1.0;
  a.null_key.assign(s, 0.0);
  a.null_key[m] = 0.5 * m - 0.5;

  a.value = Matrix(v, memory_width);
  a.value_bias.assign(v, 0.0);
  if (value_dims.empty()) {
    a.value_bias[0] = 1.0;
  } else {
    for (int j = 0; j < v; ++j) a.value(j, value_dims[j]) = 1.0;
  }
  a.null_value.assign(v, 0.0);

  a.merge = Matrix::eye(width, width + v);
  for (int j = 0; j < v; ++j) {
    auto row = a.merge.row(targets[j]);
    std::fill(row.begin(), row.end(), 0.0);
    a.merge(targets[j], width + j) = 1.0;
  }
  return a;
}

int ceil_log2(int n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

// Index of the single 1 in the slice, -1 if the slice is all zero.
int decode_one_hot(std::span<const double> x, const Slice& s,
                   const char* name) {
  int hit = -1;
  for (int i = 0; i < s.size; ++i) {
    if (x[s[i]] == 1.0) {
      if (hit >= 0) {
        throw Error(ErrorCode::kNonBinaryActivation,
                    fmt::format("slice {} is not one-hot", name));
      }
      hit = i;
    }
  }
  return hit;
}

int decode_bits(std::span<const double> x, const Slice& s) {
  int value = 0;
  for (int i = 0; i < s.size; ++i) {
    if (x[s[i]] == 1.0) value |= 1 << i;
  }
  return value;
}

}  // namespace

std::vector<int> Slice::indices() const {
  std::vector<int> out(size);
  for (int i = 0; i < size; ++i) out[i] = offset + i;
  return out;
}

std::vector<std::pair<std::string, Slice>> SliceLayout::named() const {
  return {{"st", st},     {"sym1", sym1}, {"sym2", sym2}, {"pos1", pos1},
          {"pos2", pos2}, {"pos3", pos3}, {"scr1", scr1}, {"scr2", scr2},
          {"scr3", scr3}, {"scr4", scr4}, {"scr5", scr5}};
}

SliceLayout build_layout(const TuringMachine& machine, int max_steps) {
  if (max_steps < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("T must be at least 2, got {}", max_steps));
  }
  SliceLayout l;
  l.num_states = machine.num_states();
  l.num_symbols = machine.num_symbols();
  l.max_steps = max_steps;
  l.k = ceil_log2(max_steps);
  int at = 0;
  auto take = [&at](int n) {
    Slice s{at, n};
    at += n;
    return s;
  };
  l.st = take(l.num_states);
  l.sym1 = take(l.num_symbols);
  l.sym2 = take(l.num_symbols);
  l.pos1 = take(l.k);
  l.pos2 = take(l.k);
  l.pos3 = take(l.k);
  l.scr1 = take(l.num_symbols);
  l.scr2 = take(l.num_symbols);
  l.scr3 = take(l.k);
  l.scr4 = take(2);
  l.scr5 = take(3);
  l.width = at;
  return l;
}

Matrix build_encoder(const SliceLayout& layout, std::span<const int> tape) {
  const std::size_t capacity = std::size_t{1} << layout.k;
  if (tape.size() > capacity) {
    throw Error(ErrorCode::kTapeTooLong,
                fmt::format("tape of length {} exceeds 2^{} positions",
                            tape.size(), layout.k));
  }
  const int g = layout.num_symbols;
  Matrix e(tape.size(), g + layout.k);
  for (std::size_t i = 0; i < tape.size(); ++i) {
    if (tape[i] < 0 || tape[i] >= g) {
      throw Error(ErrorCode::kUnknownSymbol,
                  fmt::format("tape symbol index {} out of range", tape[i]));
    }
    e(i, tape[i]) = 1.0;
    for (int b = 0; b < layout.k; ++b) {
      e(i, g + b) = static_cast<double>((i >> b) & 1U);
    }
  }
  return e;
}

std::array<LinearLayer, 2> build_transition(const TuringMachine& machine,
                                            const SliceLayout& layout) {
  DnfSpec dnf;
  dnf.mutually_exclusive = true;
  for (const Slice* s : {&layout.st, &layout.sym1, &layout.sym2}) {
    for (int i : s->indices()) dnf.cleared.push_back(i);
  }
  dnf.cleared.push_back(layout.scr5[0]);
  dnf.cleared.push_back(layout.scr5[1]);
  for (const Transition& t : machine.transitions()) {
    Clause c;
    c.positive = {layout.st[t.state], layout.sym1[t.read]};
    c.outputs = {layout.st[t.next], layout.sym2[t.write],
                 layout.scr5[t.move == Move::kLeft ? 0 : 1]};
    dnf.clauses.push_back(std::move(c));
  }
  return dnf_layers(dnf, layout.width, layout.width);
}

std::vector<LinearLayer> build_adder_stage(const SliceLayout& layout) {
  const int w = layout.width;
  const int k = layout.k;
  const int left = layout.scr5[0];
  const int right = layout.scr5[1];

  // Addend is +1 for a right move and all ones (-1) for a left move.
  LinearLayer pre = identity_layer(w, w + k);
  for (int i = 0; i < k; ++i) set_copy(pre, layout.pos3[i], layout.pos2[i]);
  pre.weight(w, left) = 1.0;
  pre.weight(w, right) = 1.0;
  for (int i = 1; i < k; ++i) pre.weight(w + i, left) = 1.0;

  std::vector<int> addend(k);
  for (int i = 0; i < k; ++i) addend[i] = w + i;

  std::vector<LinearLayer> layers;
  layers.push_back(std::move(pre));
  for (auto& l :
       ripple_adder(w + k, layout.pos3.indices(), addend, layout.scr5[2])) {
    layers.push_back(std::move(l));
  }
  layers.push_back(identity_layer(w + k, w));
  return layers;
}

AttentionLayer build_visited_flag(const SliceLayout& layout) {
  std::vector<Match> terms;
  for (int i = 0; i < layout.k; ++i) {
    terms.push_back({layout.pos3[i], layout.pos2[i]});
  }
  return match_layer(AttentionLayer::Source::kSelf, layout.width,
                     layout.width, terms, {}, {layout.scr4[0]});
}

std::vector<AttentionLayer> build_binary_search(const SliceLayout& layout) {
  std::vector<AttentionLayer> layers;
  for (int j = layout.k - 1; j >= 0; --j) {
    std::vector<Match> terms;
    for (int i = 0; i < layout.k; ++i) {
      terms.push_back({layout.pos3[i], layout.pos2[i]});
    }
    for (int i = layout.k - 1; i > j; --i) {
      terms.push_back({layout.scr3[i], layout.pos1[i]});
    }
    terms.push_back({-1, layout.pos1[j]});
    layers.push_back(match_layer(AttentionLayer::Source::kSelf, layout.width,
                                 layout.width, terms, {}, {layout.scr3[j]}));
  }
  return layers;
}

AttentionLayer build_get_last_written(const SliceLayout& layout) {
  std::vector<Match> terms;
  for (int i = 0; i < layout.k; ++i) {
    terms.push_back({layout.pos3[i], layout.pos2[i]});
  }
  for (int i = 0; i < layout.k; ++i) {
    terms.push_back({layout.scr3[i], layout.pos1[i]});
  }
  return match_layer(AttentionLayer::Source::kSelf, layout.width,
                     layout.width, terms, layout.sym2.indices(),
                     layout.scr1.indices());
}

AttentionLayer build_get_initial(const SliceLayout& layout) {
  const int g = layout.num_symbols;
  std::vector<Match> terms;
  for (int i = 0; i < layout.k; ++i) terms.push_back({layout.pos3[i], g + i});
  std::vector<int> symbols(g);
  for (int i = 0; i < g; ++i) symbols[i] = i;
  return match_layer(AttentionLayer::Source::kCross, layout.width,
                     g + layout.k, terms, symbols, layout.scr2.indices());
}

LinearLayer build_sharpen(const SliceLayout& layout, const Slice& target) {
  LinearLayer l = identity_layer(layout.width);
  l.activation = Activation::satlin();
  for (int i : target.indices()) {
    l.weight(i, i) = 2.0;
    l.bias[i] = -0.5;
  }
  return l;
}

std::array<LinearLayer, 3> build_assemble(const TuringMachine& machine,
                                          const SliceLayout& layout) {
  const int w = layout.width;
  const int visited = layout.scr4[0];
  const int fresh = layout.scr4[1];

  // GetV: fresh := 1 if the position was on the original tape.
  LinearLayer get_v = identity_layer(w);
  set_zero(get_v, fresh);
  for (int i : layout.scr2.indices()) get_v.weight(fresh, i) = 1.0;

  // Arrange: keep scr1 only if visited, scr2 only if not visited, and
  // fresh := 1 when neither source applies.
  LinearLayer arrange = identity_layer(w);
  for (int g = 0; g < layout.num_symbols; ++g) {
    const std::array<int, 2> last{visited, layout.scr1[g]};
    set_and(arrange, layout.scr1[g], last);
    const std::array<int, 1> orig{layout.scr2[g]};
    const std::array<int, 1> not_visited{visited};
    set_and(arrange, layout.scr2[g], orig, not_visited);
  }
  const std::array<int, 2> either{visited, fresh};
  set_nor(arrange, fresh, either);

  // Combine: sym1 := scr1 + scr2 + blank * fresh, pos2 := pos3, and clear
  // everything the next step expects to be zero.
  LinearLayer combine = identity_layer(w);
  for (int g = 0; g < layout.num_symbols; ++g) {
    const int out = layout.sym1[g];
    set_zero(combine, out);
    combine.weight(out, layout.scr1[g]) = 1.0;
    combine.weight(out, layout.scr2[g]) = 1.0;
    if (g == machine.blank()) combine.weight(out, fresh) = 1.0;
  }
  for (int i = 0; i < layout.k; ++i) {
    set_copy(combine, layout.pos2[i], layout.pos3[i]);
  }
  for (const Slice* s : {&layout.sym2, &layout.pos1, &layout.pos3,
                         &layout.scr1, &layout.scr2, &layout.scr3,
                         &layout.scr4, &layout.scr5}) {
    for (int i : s->indices()) set_zero(combine, i);
  }
  return {std::move(get_v), std::move(arrange), std::move(combine)};
}

Vector step_embedding(const SliceLayout& layout, int t) {
  Vector beta(layout.width, 0.0);
  for (int b = 0; b < layout.k; ++b) {
    beta[layout.pos1[b]] = static_cast<double>((t >> b) & 1);
  }
  return beta;
}

Vector initial_state(const TuringMachine& machine, const SliceLayout& layout,
                     std::span<const int> tape) {
  if (tape.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tape must not be empty");
  }
  Vector h(layout.width, 0.0);
  h[layout.st[machine.initial()]] = 1.0;
  h[layout.sym1[tape[0]]] = 1.0;
  return h;
}

WcmCensus WcmNetwork::census() const {
  WcmCensus c;
  c.width = layout.width;
  std::map<int, int> adders;
  for (const Layer& l : step_net.layers()) {
    ++c.total_layers;
    if (const auto* a = std::get_if<AttentionLayer>(&l.op)) {
      if (a->source == AttentionLayer::Source::kSelf) {
        ++c.self_attention;
      } else {
        ++c.cross_attention;
      }
      continue;
    }
    if (l.role == "transition") {
      if (c.transition_layers == 0) {
        c.detectors = static_cast<int>(l.out_width() - l.in_width());
      }
      ++c.transition_layers;
    } else if (l.role == "preprocess") {
      ++c.preprocess_layers;
    } else if (l.role == "full_adder") {
      ++adders[l.block];
    } else if (l.role == "project_down") {
      ++c.project_down_layers;
    } else if (l.role == "sharpen") {
      ++c.sharpen_layers;
    } else if (l.role == "assemble") {
      ++c.assembly_layers;
    }
  }
  c.full_adders = static_cast<int>(adders.size());
  return c;
}

WcmNetwork compile_wcm(const TuringMachine& machine, int max_steps) {
  const SliceLayout layout = build_layout(machine, max_steps);
  Network net(layout.width);

  auto transition = build_transition(machine, layout);
  net.append("transition", 0, std::move(transition[0]));
  net.append("transition", 1, std::move(transition[1]));

  auto adder = build_adder_stage(layout);
  const std::size_t last = adder.size() - 1;
  for (std::size_t i = 0; i < adder.size(); ++i) {
    if (i == 0) {
      net.append("preprocess", 0, std::move(adder[i]));
    } else if (i == last) {
      net.append("project_down", 0, std::move(adder[i]));
    } else {
      net.append("full_adder", static_cast<int>((i - 1) / 8),
                 std::move(adder[i]));
    }
  }

  int sharpen = 0;
  net.append("visited", 0, build_visited_flag(layout));
  net.append("sharpen", sharpen++, build_sharpen(layout, Slice{layout.scr4[0], 1}));

  auto search = build_binary_search(layout);
  for (int i = 0; i < static_cast<int>(search.size()); ++i) {
    net.append("binary_search", i, std::move(search[i]));
    const int bit = layout.k - 1 - i;
    net.append("sharpen", sharpen++,
               build_sharpen(layout, Slice{layout.scr3[bit], 1}));
  }

  net.append("last_written", 0, build_get_last_written(layout));
  net.append("sharpen", sharpen++, build_sharpen(layout, layout.scr1));
  net.append("initial_symbol", 0, build_get_initial(layout));
  net.append("sharpen", sharpen++, build_sharpen(layout, layout.scr2));

  auto assemble = build_assemble(machine, layout);
  for (int i = 0; i < 3; ++i) net.append("assemble", i, std::move(assemble[i]));

  return WcmNetwork{machine, layout, std::move(net)};
}

WcmNetwork wcm_from_network(const TuringMachine& machine, int max_steps,
                            Network step_net) {
  const SliceLayout layout = build_layout(machine, max_steps);
  const auto w = static_cast<std::size_t>(layout.width);
  if (step_net.input_width() != w || step_net.output_width() != w) {
    throw Error(ErrorCode::kWidthMismatch,
                fmt::format("network maps {} -> {}, layout needs width {}",
                            step_net.input_width(), step_net.output_width(),
                            w));
  }
  if (step_net.num_self_attention() == 0) {
    throw Error(ErrorCode::kMalformedDocument,
                "step network has no self-attention layers");
  }
  return WcmNetwork{machine, layout, std::move(step_net)};
}

WcmRun simulate(const WcmNetwork& net, std::span<const int> tape,
                int max_steps) {
  const TuringMachine& m = net.machine;
  const SliceLayout& layout = net.layout;
  if (max_steps < 1 || max_steps > layout.max_steps) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("T must be in [1, {}], got {}", layout.max_steps,
                            max_steps));
  }
  const Matrix encoder = build_encoder(layout, tape);
  const int n = static_cast<int>(tape.size());

  const LayerObserver check = [](std::size_t index, const Layer& layer,
                                 std::span<const double> out) {
    const bool loose = layer.is_attention();
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double v = out[i];
      const bool ok =
          loose ? (std::abs(v) <= kAttentionTolerance ||
                   std::abs(v - 1.0) <= kAttentionTolerance)
                : (v == 0.0 || v == 1.0);
      if (!ok) {
        throw Error(ErrorCode::kNonBinaryActivation,
                    fmt::format("layer {} ({} {}) dim {} = {}", index,
                                layer.role, layer.block, i, v));
      }
    }
  };

  WcmRun run;
  Trace& trace = run.trace;
  trace.configs.push_back(
      Configuration{m.initial(), 0, {tape.begin(), tape.end()}, 0});
  Vector x = initial_state(m, layout, tape);
  History history(net.step_net);

  for (int t = 0;; ++t) {
    const Configuration& cur = trace.configs.back();
    if (m.is_terminal(cur.state)) {
      trace.outcome = {Outcome::Kind::kHalted, cur.state, -1};
      run.answer = m.states()[cur.state];
      break;
    }
    if (t >= max_steps) {
      trace.outcome = {Outcome::Kind::kStepLimitExceeded, -1, -1};
      break;
    }

    StepResult step =
        forward_step(net.step_net, x, history, encoder, check);
    const Vector& out = step.output;
    const Vector& record = step.self_attention_inputs.front();
    const Outcome stuck{Outcome::Kind::kUndefinedTransition, cur.state,
                        cur.tape[cur.head]};

    const int state = decode_one_hot(out, layout.st, "st");
    if (state < 0) {
      trace.outcome = stuck;
      break;
    }
    const int move = record[layout.scr5[1]] == 1.0 ? 1 : -1;
    const int decoded = decode_bits(out, layout.pos2);
    const int target = cur.head + move;
    const bool off = target < 0 || target >= n;
    if (decoded != (target & ((1 << layout.k) - 1)) ||
        (off && !m.is_terminal(state))) {
      trace.outcome = {Outcome::Kind::kHeadOutOfRange, cur.state,
                       cur.tape[cur.head]};
      break;
    }
    const int head = target;

    Configuration next;
    next.state = state;
    next.head = head;
    next.step = t + 1;
    next.tape = cur.tape;
    const int written = decode_one_hot(record, layout.sym2, "sym2");
    const int read = decode_one_hot(out, layout.sym1, "sym1");
    if (written < 0 || read < 0) {
      throw Error(ErrorCode::kNonBinaryActivation,
                  fmt::format("step {}: empty symbol slice", t));
    }
    next.tape[decode_bits(record, layout.pos2)] = written;
    if (!off) next.tape[head] = read;
    trace.configs.push_back(std::move(next));

    history.append(step);
    x = out;
    const Vector beta = step_embedding(layout, t + 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += beta[i];
  }
  return run;
}

}  // namespace tmnet
