#include "tmnet/cli/machine_file.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tmnet/error.hpp"

namespace tmnet::cli {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedMachine, what);
}

json parse_json(std::string_view text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) malformed("machine file must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    malformed(fmt::format("invalid JSON: {}", e.what()));
  }
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(fmt::format("missing key '{}'", key));
  return *it;
}

std::string text(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) malformed(fmt::format("'{}' must be a string", key));
  return v.get<std::string>();
}

std::vector<std::string> names(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_array()) malformed(fmt::format("'{}' must be a list", key));
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      malformed(fmt::format("'{}' must hold strings", key));
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

int parse_move(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "L" || s == "-1") return -1;
    if (s == "R" || s == "+1" || s == "1") return 1;
  }
  malformed(fmt::format("move must be -1, +1, \"L\" or \"R\", got {}",
                        v.dump()));
}

std::vector<Top> parse_tops(const std::string& s) {
  if (s == "empty" || s == "e" || s == "-") return {Top::kEmpty};
  if (s == "0") return {Top::kZero};
  if (s == "1") return {Top::kOne};
  if (s == "*") return {Top::kEmpty, Top::kZero, Top::kOne};
  malformed(fmt::format("unknown top class '{}'", s));
}

StackOp parse_op(const std::string& s) {
  if (s == "noop") return StackOp::kNoop;
  if (s == "push0") return StackOp::kPush0;
  if (s == "push1") return StackOp::kPush1;
  if (s == "pop") return StackOp::kPop;
  malformed(fmt::format("unknown stack op '{}'", s));
}

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<int>());
  malformed(fmt::format("expected a string or integer, got {}", v.dump()));
}

// Per-stack entries from "tops"/"ops" lists or numbered keys.
std::vector<std::string> per_stack(const json& rule, const char* list,
                                   const char* prefix, int p) {
  std::vector<std::string> out;
  if (auto it = rule.find(list); it != rule.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != p) {
      malformed(fmt::format("'{}' must list {} entries", list, p));
    }
    for (const auto& e : *it) out.push_back(scalar(e));
    return out;
  }
  for (int i = 0; i < p; ++i) {
    out.push_back(scalar(field(rule, fmt::format("{}{}", prefix, i).c_str())));
  }
  return out;
}

TuringDescription turing_from(const json& doc) {
  TuringDescription d;
  d.states = names(doc, "states");
  d.alphabet = names(doc, "alphabet");
  d.initial = text(doc, "initial");
  d.terminals = names(doc, "terminals");
  if (doc.contains("blank")) d.blank = text(doc, "blank");
  const json& rows = field(doc, "transitions");
  if (!rows.is_array()) malformed("'transitions' must be a list");
  for (const auto& r : rows) {
    d.transitions.push_back({text(r, "state"), text(r, "read"),
                             text(r, "next"), text(r, "write"),
                             parse_move(field(r, "move"))});
  }
  return d;
}

StackDescription stack_from(const json& doc) {
  StackDescription d;
  d.states = names(doc, "states");
  d.initial = text(doc, "initial");
  d.terminals = names(doc, "terminals");
  if (doc.contains("stacks")) {
    const json& p = doc["stacks"];
    if (!p.is_number_integer()) malformed("'stacks' must be an integer");
    d.num_stacks = p.get<int>();
  }
  if (doc.contains("reject")) d.reject = text(doc, "reject");
  if (doc.contains("input_encoding")) {
    const json& enc = doc["input_encoding"];
    if (!enc.is_object()) malformed("'input_encoding' must be an object");
    for (const auto& [key, bit] : enc.items()) {
      if (key.size() != 1) {
        malformed(fmt::format("input character '{}' must be one byte", key));
      }
      if (!bit.is_number_integer() || (bit != 0 && bit != 1)) {
        malformed(fmt::format("encoding of '{}' must be 0 or 1", key));
      }
      d.input_encoding[key[0]] = bit.get<int>();
    }
  }
  const json& rules = field(doc, "rules");
  if (!rules.is_array()) malformed("'rules' must be a list");
  for (const auto& r : rules) {
    const auto tops = per_stack(r, "tops", "top", d.num_stacks);
    const auto ops = per_stack(r, "ops", "op", d.num_stacks);
    StackDescription::Rule base;
    base.state = text(r, "state");
    base.next = text(r, "next");
    for (const auto& o : ops) base.ops.push_back(parse_op(o));
    // Expand wildcards into one rule per concrete top tuple.
    std::vector<std::vector<Top>> combos{{}};
    for (const auto& t : tops) {
      std::vector<std::vector<Top>> grown;
      for (const auto& prefix : combos) {
        for (Top c : parse_tops(t)) {
          auto next = prefix;
          next.push_back(c);
          grown.push_back(std::move(next));
        }
      }
      combos = std::move(grown);
    }
    for (auto& c : combos) {
      StackDescription::Rule rule = base;
      rule.tops = std::move(c);
      d.rules.push_back(std::move(rule));
    }
  }
  return d;
}

MachineFile::Kind kind_of(const json& doc) {
  if (auto it = doc.find("kind"); it != doc.end()) {
    const std::string k = it->is_string() ? it->get<std::string>() : "";
    if (k == "turing") return MachineFile::Kind::kTuring;
    if (k == "stack") return MachineFile::Kind::kStack;
    malformed(fmt::format("unknown machine kind {}", it->dump()));
  }
  if (doc.contains("rules")) return MachineFile::Kind::kStack;
  if (doc.contains("transitions")) return MachineFile::Kind::kTuring;
  malformed("cannot tell the machine kind: no 'transitions' or 'rules'");
}

}  // namespace

TuringDescription parse_turing(std::string_view text) {
  return turing_from(parse_json(text));
}

StackDescription parse_stack(std::string_view text) {
  return stack_from(parse_json(text));
}

MachineFile parse_machine(std::string_view source) {
  const json doc = parse_json(source);
  MachineFile file;
  file.kind = kind_of(doc);
  if (file.kind == MachineFile::Kind::kStack) {
    file.stack = StackMachine::validate(stack_from(doc));
    return file;
  }
  file.turing = TuringMachine::validate(turing_from(doc));
  if (auto it = doc.find("input"); it != doc.end()) {
    if (!it->is_object()) malformed("'input' must be an object");
    InputFraming f;
    f.alphabet = text(*it, "alphabet");
    if (it->contains("prefix")) f.prefix = text(*it, "prefix");
    if (it->contains("suffix")) f.suffix = text(*it, "suffix");
    file.framing = std::move(f);
  }
  return file;
}

MachineFile load_machine(const std::string& path) {
  return parse_machine(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("cannot open '{}'", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace tmnet::cli
