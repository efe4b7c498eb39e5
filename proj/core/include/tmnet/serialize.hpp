#pragma once

// Weight documents: a JSON text listing every layer with its kind, shape,
// activation, gain and weights. Numbers are written with 17 significant
// digits, so reading a document back reproduces every weight bit for bit.
//
//   {
//     "format": "tmnet-weights",
//     "version": 1,
//     "arch": "wcm21",
//     "machine_hash": "9c1e...",
//     "meta": {"max_steps": "100"},
//     "input_width": 59,
//     "layers": [
//       {"type": "linear", "role": "transition", "block": 0,
//        "activation": "relu",
//        "weight": {"rows": 70, "cols": 59, "data": [...]},
//        "bias": [...]},
//       {"type": "attention", "role": "visited", "block": 0,
//        "source": "self", "gain": 9999.0,
//        "query": {...}, "query_bias": [...], "key": {...},
//        "key_bias": [...], "value": {...}, "value_bias": [...],
//        "null_key": [...], "null_value": [...], "merge": {...}}
//     ]
//   }

#include <map>
#include <string>
#include <string_view>

#include "tmnet/network.hpp"

namespace tmnet {

inline constexpr int kWeightFormatVersion = 1;

struct WeightDocument {
  std::string arch;
  std::string machine_hash;
  std::map<std::string, std::string> meta;
  Network network;

  friend bool operator==(const WeightDocument&,
                         const WeightDocument&) = default;
};

std::string serialize(const WeightDocument& document);

// Throws kMalformedDocument or kVersionMismatch.
WeightDocument deserialize(std::string_view text);

}  // namespace tmnet
