#include "tmnet/serialize.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tmnet/error.hpp"

namespace tmnet {

namespace {

using nlohmann::json;

constexpr std::string_view kFormatName = "tmnet-weights";

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot serialize a non-finite weight");
  }
  std::string s = fmt::format("{:.17g}", v);
  // Keep a fraction or exponent so readers treat "-0" as a float.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  out += s;
}

void write_vector(std::string& out, std::span<const double> v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    write_number(out, v[i]);
  }
  out += ']';
}

void write_matrix(std::string& out, const Matrix& m) {
  out += fmt::format("{{\"rows\":{},\"cols\":{},\"data\":", m.rows(), m.cols());
  write_vector(out, m.data());
  out += '}';
}

std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

std::string_view activation_name(const Activation& a) {
  switch (a.kind) {
    case Activation::Kind::kIdentity: return "identity";
    case Activation::Kind::kRelu: return "relu";
    case Activation::Kind::kSatlin: return "satlin";
    case Activation::Kind::kSoftmaxRow: return "softmax";
  }
  return "identity";
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedDocument, what);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    malformed(fmt::format("missing field '{}'", key));
  }
  return obj.at(key);
}

Vector read_vector(const json& j, const char* what) {
  if (!j.is_array()) malformed(fmt::format("'{}' is not an array", what));
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) malformed(fmt::format("'{}' holds a non-number", what));
    v.push_back(x.get<double>());
  }
  return v;
}

Matrix read_matrix(const json& j, const char* what) {
  const auto rows = field(j, "rows");
  const auto cols = field(j, "cols");
  if (!rows.is_number_unsigned() || !cols.is_number_unsigned()) {
    malformed(fmt::format("'{}' has bad dimensions", what));
  }
  Vector data = read_vector(field(j, "data"), what);
  const auto r = rows.get<std::size_t>();
  const auto c = cols.get<std::size_t>();
  if (data.size() != r * c) {
    malformed(fmt::format("'{}' is {}x{} but holds {} values", what, r, c,
                          data.size()));
  }
  return Matrix(r, c, std::move(data));
}

Activation read_activation(const json& layer) {
  const std::string name = field(layer, "activation").get<std::string>();
  if (name == "identity") return Activation::identity();
  if (name == "relu") return Activation::relu();
  if (name == "satlin") return Activation::satlin();
  malformed(fmt::format("unknown activation '{}'", name));
}

}  // namespace

std::string serialize(const WeightDocument& doc) {
  std::string out;
  out += fmt::format("{{\n\"format\":{},\n\"version\":{},\n\"arch\":{},\n",
                     quote(kFormatName), kWeightFormatVersion, quote(doc.arch));
  out += fmt::format("\"machine_hash\":{},\n\"meta\":{{", quote(doc.machine_hash));
  bool first = true;
  for (const auto& [k, v] : doc.meta) {
    if (!first) out += ',';
    first = false;
    out += quote(k) + ':' + quote(v);
  }
  out += fmt::format("}},\n\"input_width\":{},\n\"layers\":[\n",
                     doc.network.input_width());
  const auto& layers = doc.network.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& layer = layers[i];
    if (i) out += ",\n";
    if (const auto* lin = std::get_if<LinearLayer>(&layer.op)) {
      out += fmt::format(
          "{{\"type\":\"linear\",\"role\":{},\"block\":{},\"activation\":\"{}\","
          "\"weight\":",
          quote(layer.role), layer.block, activation_name(lin->activation));
      write_matrix(out, lin->weight);
      out += ",\"bias\":";
      write_vector(out, lin->bias);
      out += '}';
    } else {
      const auto& a = std::get<AttentionLayer>(layer.op);
      out += fmt::format(
          "{{\"type\":\"attention\",\"role\":{},\"block\":{},\"source\":\"{}\","
          "\"gain\":",
          quote(layer.role), layer.block,
          a.source == AttentionLayer::Source::kSelf ? "self" : "cross");
      write_number(out, a.gain);
      out += ",\"query\":";
      write_matrix(out, a.query);
      out += ",\"query_bias\":";
      write_vector(out, a.query_bias);
      out += ",\"key\":";
      write_matrix(out, a.key);
      out += ",\"key_bias\":";
      write_vector(out, a.key_bias);
      out += ",\"value\":";
      write_matrix(out, a.value);
      out += ",\"value_bias\":";
      write_vector(out, a.value_bias);
      out += ",\"null_key\":";
      write_vector(out, a.null_key);
      out += ",\"null_value\":";
      write_vector(out, a.null_value);
      out += ",\"merge\":";
      write_matrix(out, a.merge);
      out += '}';
    }
  }
  out += "\n]\n}\n";
  return out;
}

WeightDocument deserialize(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  try {
    if (!root.is_object()) malformed("document is not an object");
    if (field(root, "format") != kFormatName) {
      malformed("not a tmnet weight document");
    }
    const auto& version = field(root, "version");
    if (!version.is_number_integer()) malformed("version is not an integer");
    if (version.get<int>() != kWeightFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  fmt::format("document version {}, supported {}",
                              version.get<int>(), kWeightFormatVersion));
    }
    WeightDocument doc;
    doc.arch = field(root, "arch").get<std::string>();
    doc.machine_hash = field(root, "machine_hash").get<std::string>();
    if (root.contains("meta")) {
      for (const auto& [k, v] : root.at("meta").items()) {
        doc.meta[k] = v.get<std::string>();
      }
    }
    doc.network = Network(field(root, "input_width").get<std::size_t>());
    const auto& layers = field(root, "layers");
    if (!layers.is_array()) malformed("'layers' is not an array");
    for (const auto& jl : layers) {
      const std::string type = field(jl, "type").get<std::string>();
      const std::string role = field(jl, "role").get<std::string>();
      const int block = field(jl, "block").get<int>();
      if (type == "linear") {
        LinearLayer l;
        l.weight = read_matrix(field(jl, "weight"), "weight");
        l.bias = read_vector(field(jl, "bias"), "bias");
        l.activation = read_activation(jl);
        doc.network.append(role, block, std::move(l));
      } else if (type == "attention") {
        AttentionLayer a;
        const std::string source = field(jl, "source").get<std::string>();
        if (source == "self") {
          a.source = AttentionLayer::Source::kSelf;
        } else if (source == "cross") {
          a.source = AttentionLayer::Source::kCross;
        } else {
          malformed(fmt::format("unknown attention source '{}'", source));
        }
        a.gain = field(jl, "gain").get<double>();
        a.query = read_matrix(field(jl, "query"), "query");
        a.query_bias = read_vector(field(jl, "query_bias"), "query_bias");
        a.key = read_matrix(field(jl, "key"), "key");
        a.key_bias = read_vector(field(jl, "key_bias"), "key_bias");
        a.value = read_matrix(field(jl, "value"), "value");
        a.value_bias = read_vector(field(jl, "value_bias"), "value_bias");
        a.null_key = read_vector(field(jl, "null_key"), "null_key");
        a.null_value = read_vector(field(jl, "null_value"), "null_value");
        a.merge = read_matrix(field(jl, "merge"), "merge");
        doc.network.append(role, block, std::move(a));
      } else {
        malformed(fmt::format("unknown layer kind '{}'", type));
      }
    }
    return doc;
  } catch (const json::exception& e) {
    malformed(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedDocument ||
        e.code() == ErrorCode::kVersionMismatch) {
      throw;
    }
    malformed(e.what());
  }
}

}  // namespace tmnet
