#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sepnet/errors.hpp"
#include "sepnet/network.hpp"

namespace sepnet {

// Layers with more than this many dense entries are written in coordinate
// form ("weights_sparse") instead of a dense "weights" array.
inline constexpr long long kDenseEntryLimit = 1LL << 20;

// Network document:
//   {"input_dim": int, "activation": "logistic"|"tanh"|"relu",
//    "layers": [{"weights": [[f64]], "bias": [f64], "activated": bool}, ...]}
// A layer may carry {"weights_sparse": {"rows", "cols", "entries": [[i, j, v]]}}
// in place of "weights". Doubles are written in shortest round-trip form, so
// deserialize(serialize(net)) reproduces every weight bit for bit.
nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc);

std::string serialize(const Network& net);
// Streams the serialize() text without holding the document in memory.
void write_network(const Network& net, std::ostream& out);
// Throws ParseError naming the byte offset or JSON path of the problem.
Network deserialize(std::string_view text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace sepnet
