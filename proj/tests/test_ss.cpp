#include <gtest/gtest.h>

#include "support.hpp"
#include "tmnet/error.hpp"
#include "tmnet/ss.hpp"

namespace tmnet {
namespace {

using testing::bp_stack;

StackDescription single_rule_machine() {
  StackDescription d;
  d.states = {"a", "h"};
  d.initial = "a";
  d.terminals = {"h"};
  d.rules = {{"a", {Top::kEmpty, Top::kEmpty}, "h",
              {StackOp::kPush1, StackOp::kNoop}}};
  d.input_encoding = {{'0', 0}, {'1', 1}};
  return d;
}

// Runs F4 and F3 on one synthetic configuration.
Vector detect(const std::vector<LinearLayer>& layers, const Vector& x) {
  Vector y = x;
  for (const LinearLayer& l : layers) y = apply_linear(l, y);
  return y;
}

TEST(Detector, OneHotForEveryCombo) {
  const StackMachine m = bp_stack();
  const CantorCodec codec(4);
  const auto layers = build_detector(m, codec);
  ASSERT_EQ(layers.size(), 2U);
  EXPECT_EQ(m.num_combos(), 54);
  for (int combo = 0; combo < m.num_combos(); ++combo) {
    Vector x(m.num_states() + 2, 0.0);
    x[m.combo_state(combo)] = 1.0;
    const auto tops = m.combo_tops(combo);
    for (int i = 0; i < 2; ++i) {
      const std::vector<int> stack =
          tops[i] == Top::kEmpty ? std::vector<int>{}
          : tops[i] == Top::kOne ? std::vector<int>{1, 0, 0}
                                 : std::vector<int>{0, 1, 1};
      x[m.num_states() + i] = codec.encode(stack);
    }
    const Vector y = detect(layers, x);
    for (int d = 0; d < m.num_combos(); ++d) {
      EXPECT_EQ(y[d], d == combo ? 1.0 : 0.0) << combo << " " << d;
    }
  }
}

TEST(Routing, ReproducesEveryRule) {
  const StackMachine m = bp_stack();
  const RoutingWeights r = solve_routing(m);
  EXPECT_EQ(r.beta.rows(), 6U);
  EXPECT_EQ(r.beta.cols(), 54U);
  EXPECT_EQ(r.gamma.rows(), 8U);
  EXPECT_LT(r.residual, 1e-9);
  for (int c = 0; c < m.num_combos(); ++c) {
    const auto rule = m.effective_rule(c);
    const int next = rule ? rule->next : m.combo_state(c);
    for (int q = 0; q < m.num_states(); ++q) {
      EXPECT_NEAR(r.beta(q, c), q == next ? 1.0 : 0.0, 1e-12);
    }
    for (int i = 0; i < 2; ++i) {
      const int op = rule ? static_cast<int>(rule->ops[i]) : 0;
      for (int o = 0; o < kNumStackOps; ++o) {
        EXPECT_NEAR(r.gamma(4 * i + o, c), o == op ? 1.0 : 0.0, 1e-12);
      }
    }
  }
}

TEST(Routing, SingleRule) {
  int reject = -1;
  const StackMachine m = StackMachine::validate(single_rule_machine())
                             .with_reject("reject", &reject);
  const RoutingWeights r = solve_routing(m);
  const int fired = m.combo_index(0, std::vector<Top>{Top::kEmpty, Top::kEmpty});
  EXPECT_NEAR(r.beta(1, fired), 1.0, 1e-12);
  EXPECT_NEAR(r.gamma(2, fired), 1.0, 1e-12);
  // Every other combo of state a routes to the reject state.
  for (int c = 0; c < 9; ++c) {
    if (c != fired) EXPECT_NEAR(r.beta(reject, c), 1.0, 1e-12) << c;
  }
}

TEST(Routing, UndefinedCombos) {
  const StackMachine m = StackMachine::validate(single_rule_machine());
  EXPECT_THROW(solve_routing(m), Error);
  int reject = -1;
  EXPECT_NO_THROW(solve_routing(m.with_reject("reject", &reject)));
  EXPECT_EQ(reject, 2);
}

TEST(Compile4, Shape) {
  const SsNetwork net = compile4(bp_stack());
  EXPECT_EQ(net.detector_width(), 54);
  EXPECT_EQ(net.layers_per_step(), 4);
  EXPECT_EQ(net.step_net.input_width(), 8U);
  EXPECT_FALSE(net.synthesized_reject.has_value());
}

TEST(Compile4, MatchesInterpreter) {
  const StackMachine m = bp_stack();
  const SsNetwork net = compile4(m);
  for (const char* s : {"(()())", "(", "", "())", "((()))()"}) {
    const StackConfiguration c0 = encode_input_to_stacks(m, s);
    const StackTrace got = simulate(net, c0, 40);
    const StackTrace want = sm_run(m, c0, 40);
    EXPECT_EQ(got.configs, want.configs) << s;
    EXPECT_EQ(got.outcome, want.outcome) << s;
    EXPECT_EQ(m.states()[got.outcome.state] == "T", testing::balanced(s)) << s;
  }
  EXPECT_LE(simulate(net, encode_input_to_stacks(m, ""), 12).configs.size(), 3U);
  EXPECT_LE(simulate(net, encode_input_to_stacks(m, "(()())"), 12).configs.size(),
            13U);
}

TEST(Compile4, SynthesizedRejectIsUndefined) {
  StackDescription d = single_rule_machine();
  const StackMachine m = StackMachine::validate(d);
  const SsNetwork net = compile4(m);
  ASSERT_TRUE(net.synthesized_reject.has_value());
  EXPECT_EQ(net.machine.states().back(), "reject");
  const StackConfiguration c0 = encode_input_to_stacks(m, "1");
  const StackTrace got = simulate(net, c0, 5);
  const StackTrace want = sm_run(m, c0, 5);
  EXPECT_EQ(got.outcome, want.outcome);
  EXPECT_EQ(got.outcome.kind, Outcome::Kind::kUndefinedTransition);
  EXPECT_EQ(got.configs, want.configs);
}

TEST(Compile4, EncodeDecode) {
  const StackMachine m = bp_stack();
  const SsNetwork net = compile4(m);
  const StackConfiguration c = encode_input_to_stacks(m, "(()");
  EXPECT_EQ(net.decode_state(net.encode_state(c)).stacks, c.stacks);
  Vector bad = net.encode_state(c);
  bad[0] = 0.5;
  EXPECT_THROW(net.decode_state(bad), Error);
}

TEST(Compile1, Shape) {
  const SsNetwork net = compile1(bp_stack());
  EXPECT_EQ(net.layers_per_step(), 1);
  EXPECT_EQ(net.codec.base(), 40);
  EXPECT_EQ(net.step_net.input_width(), 391U);
}

TEST(Compile1, MatchesInterpreter) {
  const StackMachine m = bp_stack();
  const SsNetwork net = compile1(m);
  for (const char* s : {"(())", "(()())()", "(((())))", ")(", "((", ""}) {
    const StackConfiguration c0 = encode_input_to_stacks(m, s);
    const StackTrace got = simulate(net, c0, 40);
    const StackTrace want = sm_run(m, c0, 40);
    EXPECT_EQ(got.configs, want.configs) << s;
    EXPECT_EQ(got.outcome, want.outcome) << s;
  }
}

TEST(Compile1, RequiresTwoStacks) {
  StackDescription d = single_rule_machine();
  d.num_stacks = 1;
  d.rules[0].tops = {Top::kEmpty};
  d.rules[0].ops = {StackOp::kPush1};
  EXPECT_THROW(compile1(StackMachine::validate(d)), Error);
}

TEST(SsFromNetwork, RoundTrip) {
  const StackMachine m = bp_stack();
  const SsNetwork net = compile4(m);
  const SsNetwork again = ss_from_network(m, SsVariant::kFourLayer, net.step_net);
  const StackConfiguration c0 = encode_input_to_stacks(m, "()()");
  EXPECT_EQ(simulate(again, c0, 20).configs, simulate(net, c0, 20).configs);
  EXPECT_THROW(ss_from_network(m, SsVariant::kOneLayer, net.step_net), Error);
}

}  // namespace
}  // namespace tmnet
