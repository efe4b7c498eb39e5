#include <gtest/gtest.h>

#include "support.hpp"
#include "tmnet/error.hpp"
#include "tmnet/wcm.hpp"

namespace tmnet {
namespace {

using testing::bp_turing;

class WcmStages : public ::testing::Test {
 protected:
  TuringMachine m = bp_turing();
  SliceLayout l = build_layout(m, 100);

  int st(const char* s) const { return l.st[*m.state_index(s)]; }
  int sym(const Slice& slice, const char* s) const {
    return slice[*m.symbol_index(s)];
  }
  void set_bits(Vector& x, const Slice& s, int value) const {
    for (int i = 0; i < s.size; ++i) x[s[i]] = (value >> i) & 1;
  }
  int read_bits(const Vector& x, const Slice& s) const {
    int v = 0;
    for (int i = 0; i < s.size; ++i) {
      if (x[s[i]] > 0.5) v |= 1 << i;
    }
    return v;
  }
  Vector run_linear(const std::vector<LinearLayer>& layers, Vector x) const {
    for (const LinearLayer& layer : layers) x = apply_linear(layer, x);
    return x;
  }
  Vector transition(const char* state, const char* read) const {
    Vector x(l.width, 0.0);
    x[st(state)] = 1.0;
    x[sym(l.sym1, read)] = 1.0;
    const auto layers = build_transition(m, l);
    return run_linear({layers[0], layers[1]}, x);
  }
  // History row written at step t with the head at position p.
  Vector history_row(int t, int p, const char* written) const {
    Vector row(l.width, 0.0);
    set_bits(row, l.pos1, t);
    set_bits(row, l.pos2, p);
    row[sym(l.sym2, written)] = 1.0;
    return row;
  }
};

TEST_F(WcmStages, Layout) {
  EXPECT_EQ(l.k, 7);
  EXPECT_EQ(l.width, 59);
  EXPECT_EQ(l.scr4.size, 2);
  EXPECT_EQ(l.scr5.size, 3);
  EXPECT_EQ(l.scr5.end(), l.width);
}

TEST(WcmLayout, SmallMachine) {
  TuringDescription d;
  d.states = {"a", "h"};
  d.alphabet = {"0", "1"};
  d.initial = "a";
  d.terminals = {"h"};
  d.transitions = {{"a", "0", "h", "1", 1}, {"a", "1", "a", "0", 1}};
  const TuringMachine m = TuringMachine::validate(d);
  const SliceLayout l = build_layout(m, 4);
  EXPECT_EQ(l.k, 2);
  EXPECT_EQ(l.width, 23);
  EXPECT_EQ(compile_wcm(m, 4).step_net.output_width(), 23U);
  EXPECT_THROW(build_layout(m, 1), Error);
}

TEST_F(WcmStages, Encoder) {
  const Matrix e = build_encoder(l, m.tape_from_string("B()E"));
  ASSERT_EQ(e.rows(), 4U);
  ASSERT_EQ(e.cols(), 12U);
  const std::vector<double> row0{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  const std::vector<double> row2{0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0};
  EXPECT_TRUE(std::equal(row0.begin(), row0.end(), e.row(0).begin()));
  EXPECT_TRUE(std::equal(row2.begin(), row2.end(), e.row(2).begin()));
  const std::vector<int> long_tape(200, 0);
  try {
    build_encoder(l, long_tape);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kTapeTooLong);
  }
}

TEST_F(WcmStages, TransitionLeft) {
  const Vector y = transition("R", ")");
  EXPECT_EQ(y[st("M")], 1.0);
  EXPECT_EQ(y[st("R")], 0.0);
  EXPECT_EQ(y[sym(l.sym2, "*")], 1.0);
  EXPECT_EQ(y[l.scr5[0]], 1.0);
  EXPECT_EQ(y[l.scr5[1]], 0.0);
}

TEST_F(WcmStages, TransitionRight) {
  const Vector y = transition("I", "B");
  EXPECT_EQ(y[st("R")], 1.0);
  EXPECT_EQ(y[sym(l.sym2, "B")], 1.0);
  EXPECT_EQ(y[l.scr5[0]], 0.0);
  EXPECT_EQ(y[l.scr5[1]], 1.0);
}

TEST_F(WcmStages, TransitionMatchesEveryRow) {
  for (const Transition& t : m.transitions()) {
    const Vector y = transition(m.states()[t.state].c_str(),
                                m.alphabet()[t.read].c_str());
    for (int q = 0; q < l.num_states; ++q) {
      EXPECT_EQ(y[l.st[q]], q == t.next ? 1.0 : 0.0);
    }
    for (int g = 0; g < l.num_symbols; ++g) {
      EXPECT_EQ(y[l.sym2[g]], g == t.write ? 1.0 : 0.0);
    }
    EXPECT_EQ(y[l.scr5[t.move == Move::kLeft ? 0 : 1]], 1.0);
  }
}

TEST_F(WcmStages, Adder) {
  const auto layers = build_adder_stage(l);
  EXPECT_EQ(layers.size(), 1U + 8U * 7U + 1U);
  auto moved = [&](int pos, bool right) {
    Vector x(l.width, 0.0);
    set_bits(x, l.pos2, pos);
    x[l.scr5[right ? 1 : 0]] = 1.0;
    const Vector y = run_linear(layers, x);
    EXPECT_EQ(y.size(), static_cast<std::size_t>(l.width));
    EXPECT_EQ(read_bits(y, l.pos2), pos);
    return read_bits(y, l.pos3);
  };
  EXPECT_EQ(moved(3, true), 4);
  EXPECT_EQ(moved(3, false), 2);
  EXPECT_EQ(moved(0, false), 127);
}

TEST_F(WcmStages, VisitedFlag) {
  const AttentionLayer a = build_visited_flag(l);
  Vector x(l.width, 0.0);
  set_bits(x, l.pos3, 2);
  Matrix memory(0, l.width);
  EXPECT_EQ(apply_attention(a, x, memory)[l.scr4[0]], 0.0);
  memory.append_row(history_row(0, 0, "B"));
  memory.append_row(history_row(1, 2, "*"));
  EXPECT_NEAR(apply_attention(a, x, memory)[l.scr4[0]], 1.0, 1e-9);
  memory.append_row(history_row(2, 2, "*"));
  memory.append_row(history_row(3, 2, "*"));
  EXPECT_EQ(apply_attention(a, x, memory)[l.scr4[0]], 1.0);
}

TEST_F(WcmStages, BinarySearchFindsLatestWrite) {
  auto search = [&](const std::vector<int>& writes_at_3) {
    Matrix memory(0, l.width);
    for (int t = 0; t < 8; ++t) {
      const bool hit = std::find(writes_at_3.begin(), writes_at_3.end(), t) !=
                       writes_at_3.end();
      memory.append_row(history_row(t, hit ? 3 : 1, "*"));
    }
    Vector x(l.width, 0.0);
    set_bits(x, l.pos3, 3);
    const auto layers = build_binary_search(l);
    EXPECT_EQ(layers.size(), 7U);
    const LinearLayer sharpen = build_sharpen(l, l.scr3);
    for (const AttentionLayer& a : layers) {
      x = apply_linear(sharpen, apply_attention(a, x, memory));
    }
    return read_bits(x, l.scr3);
  };
  EXPECT_EQ(search({5}), 5);
  EXPECT_EQ(search({2, 6}), 6);
  EXPECT_EQ(search({0, 1, 7}), 7);
}

TEST_F(WcmStages, LastWritten) {
  const AttentionLayer a = build_get_last_written(l);
  Matrix memory(0, l.width);
  memory.append_row(history_row(0, 1, "("));
  memory.append_row(history_row(1, 1, "*"));
  Vector x(l.width, 0.0);
  set_bits(x, l.pos3, 1);
  set_bits(x, l.scr3, 1);
  const Vector y = apply_attention(a, x, memory);
  for (int g = 0; g < l.num_symbols; ++g) {
    EXPECT_NEAR(y[l.scr1[g]], g == *m.symbol_index("*") ? 1.0 : 0.0, 1e-9);
  }
  set_bits(x, l.pos3, 5);
  const Vector none = apply_attention(a, x, memory);
  for (int g = 0; g < l.num_symbols; ++g) EXPECT_NEAR(none[l.scr1[g]], 0, 1e-9);
}

TEST_F(WcmStages, InitialSymbol) {
  const AttentionLayer a = build_get_initial(l);
  const Matrix e = build_encoder(l, m.tape_from_string("B()E"));
  auto lookup = [&](int pos) {
    Vector x(l.width, 0.0);
    set_bits(x, l.pos3, pos);
    const Vector y = apply_attention(a, x, e);
    int found = -1;
    for (int g = 0; g < l.num_symbols; ++g) {
      if (y[l.scr2[g]] > 0.5) found = g;
      EXPECT_TRUE(y[l.scr2[g]] < 1e-9 || y[l.scr2[g]] > 1 - 1e-9);
    }
    return found;
  };
  EXPECT_EQ(lookup(2), *m.symbol_index(")"));
  EXPECT_EQ(lookup(0), *m.symbol_index("B"));
  EXPECT_EQ(lookup(50), -1);
}

TEST_F(WcmStages, AssemblePriority) {
  const auto layers = build_assemble(m, l);
  auto assemble = [&](int visited, const char* last, const char* orig) {
    Vector x(l.width, 0.0);
    x[l.scr4[0]] = visited;
    if (last) x[sym(l.scr1, last)] = 1.0;
    if (orig) x[sym(l.scr2, orig)] = 1.0;
    set_bits(x, l.pos3, 6);
    const Vector y = run_linear({layers[0], layers[1], layers[2]}, x);
    EXPECT_EQ(read_bits(y, l.pos2), 6);
    for (const Slice* s : {&l.scr1, &l.scr2, &l.scr4, &l.scr5, &l.pos3}) {
      for (int i : s->indices()) EXPECT_EQ(y[i], 0.0);
    }
    int found = -1;
    for (int g = 0; g < l.num_symbols; ++g) {
      if (y[l.sym1[g]] == 1.0) {
        EXPECT_EQ(found, -1);
        found = g;
      }
    }
    return found < 0 ? std::string("?") : m.alphabet()[found];
  };
  EXPECT_EQ(assemble(1, "*", "("), "*");
  EXPECT_EQ(assemble(0, nullptr, ")"), ")");
  EXPECT_EQ(assemble(0, nullptr, nullptr), "E");
}

TEST_F(WcmStages, StepEmbedding) {
  const Vector beta = step_embedding(l, 5);
  EXPECT_EQ(read_bits(beta, l.pos1), 5);
  double total = 0;
  for (double v : beta) total += v;
  EXPECT_EQ(total, 2.0);
}

TEST(WcmCompile, Census) {
  const WcmCensus c = compile_wcm(bp_turing(), 100).census();
  EXPECT_EQ(c.width, 59);
  EXPECT_EQ(c.detectors, 11);
  EXPECT_EQ(c.full_adders, 7);
  EXPECT_EQ(c.self_attention, 9);
  EXPECT_EQ(c.cross_attention, 1);
  EXPECT_EQ(c.assembly_layers, 3);
}

TEST(WcmCompile, WidthCheckOnReload) {
  const TuringMachine m = bp_turing();
  const WcmNetwork net = compile_wcm(m, 100);
  EXPECT_NO_THROW(wcm_from_network(m, 100, net.step_net));
  EXPECT_THROW(wcm_from_network(m, 300, net.step_net), Error);
}

TEST(WcmSimulate, ShortTraceMatchesInterpreter) {
  const TuringMachine m = bp_turing();
  const WcmNetwork net = compile_wcm(m, 100);
  const auto tape = m.tape_from_string("B()E");
  const WcmRun run = simulate(net, tape, 100);
  const Trace oracle = tm_run(m, tape, 100);
  EXPECT_EQ(run.trace.configs, oracle.configs);
  EXPECT_EQ(run.trace.outcome, oracle.outcome);
  EXPECT_EQ(run.answer, "T");
}

TEST(WcmSimulate, Answers) {
  const TuringMachine m = bp_turing();
  const WcmNetwork net = compile_wcm(m, 100);
  EXPECT_EQ(simulate(net, m.tape_from_string("B()((()(()))())E"), 100).answer,
            "T");
  EXPECT_EQ(simulate(net, m.tape_from_string("B(()E"), 100).answer, "F");
  EXPECT_EQ(simulate(net, m.tape_from_string("B)(E"), 100).answer, "F");
}

TEST(WcmSimulate, StepLimit) {
  const TuringMachine m = bp_turing();
  const WcmNetwork net = compile_wcm(m, 100);
  const WcmRun run = simulate(net, m.tape_from_string("B()E"), 3);
  EXPECT_EQ(run.trace.outcome.kind, Outcome::Kind::kStepLimitExceeded);
  EXPECT_EQ(run.trace.configs.size(), 4U);
  EXPECT_FALSE(run.answer.has_value());
}

TEST(WcmSimulate, CorruptedWeightsDetected) {
  const TuringMachine m = bp_turing();
  WcmNetwork net = compile_wcm(m, 100);
  Network broken(net.step_net.input_width());
  for (Layer layer : net.step_net.layers()) {
    if (layer.role == "transition" && layer.block == 0) {
      std::get<LinearLayer>(layer.op).bias[net.layout.width] += 0.3;
    }
    broken.append(std::move(layer));
  }
  const WcmNetwork bad = wcm_from_network(m, 100, broken);
  try {
    simulate(bad, m.tape_from_string("B()E"), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonBinaryActivation);
  }
}

}  // namespace
}  // namespace tmnet
