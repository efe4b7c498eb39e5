#include "tmnet/cli/corpus.hpp"

namespace tmnet::cli {

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

TuringMachine random_turing(std::mt19937_64& rng, int max_states,
                            int max_symbols) {
  const int q = draw(rng, 2, max_states);
  const int g = draw(rng, 2, max_symbols);
  TuringDescription d;
  for (int i = 0; i < q; ++i) d.states.push_back("q" + std::to_string(i));
  for (int i = 0; i < g; ++i) d.alphabet.push_back(std::string(1, 'a' + i));
  d.initial = d.states.front();
  d.terminals = {d.states.back()};
  for (int s = 0; s + 1 < q; ++s) {
    for (int a = 0; a < g; ++a) {
      d.transitions.push_back({d.states[s], d.alphabet[a],
                               d.states[draw(rng, 0, q - 1)],
                               d.alphabet[draw(rng, 0, g - 1)],
                               draw(rng, 0, 1) ? 1 : -1});
    }
  }
  return TuringMachine::validate(d);
}

std::string random_string(std::mt19937_64& rng, std::string_view alphabet,
                          int min_len, int max_len) {
  const int n = draw(rng, min_len, max_len);
  std::string s;
  for (int i = 0; i < n; ++i) {
    s += alphabet[draw(rng, 0, static_cast<int>(alphabet.size()) - 1)];
  }
  return s;
}

std::vector<std::string> all_strings(std::string_view alphabet, int max_len) {
  std::vector<std::string> out{""};
  std::size_t level = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = level; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    level = end;
  }
  return out;
}

}  // namespace tmnet::cli
