#include "sepnet/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sepnet/errors.hpp"

namespace sepnet {

using nlohmann::json;

namespace {

using Triplet = Eigen::Triplet<double>;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("network document at " + where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "non-finite number");
  return d;
}

long long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long long>();
}

bool stored(double v) { return v != 0.0 || std::signbit(v); }

json dense_weights(const SparseMatrix& w) {
  const Matrix d(w);
  json rows = json::array();
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < d.cols(); ++c) row.push_back(d(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json sparse_weights(const SparseMatrix& w) {
  json entries = json::array();
  for (int r = 0; r < w.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(w, r); it; ++it) {
      entries.push_back(json::array({it.row(), it.col(), it.value()}));
    }
  }
  return json{{"rows", w.rows()}, {"cols", w.cols()}, {"entries", std::move(entries)}};
}

SparseMatrix read_dense(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) fail(where, "expected a non-empty array of rows");
  const std::size_t n_rows = rows.size();
  std::size_t n_cols = 0;
  std::vector<Triplet> trips;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::string rw = where + "/" + std::to_string(r);
    if (!rows[r].is_array()) fail(rw, "expected an array");
    if (r == 0) n_cols = rows[r].size();
    if (rows[r].size() != n_cols) fail(rw, "ragged row");
    for (std::size_t c = 0; c < n_cols; ++c) {
      const double v = number(rows[r][c], rw + "/" + std::to_string(c));
      if (stored(v)) trips.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
    }
  }
  if (n_cols == 0) fail(where, "rows are empty");
  SparseMatrix m(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseMatrix read_sparse(const json& doc, const std::string& where) {
  const long long rows = integer(member(doc, "rows", where), where + "/rows");
  const long long cols = integer(member(doc, "cols", where), where + "/cols");
  if (rows < 1 || cols < 1) fail(where, "rows and cols must be positive");
  const json& entries = member(doc, "entries", where);
  if (!entries.is_array()) fail(where + "/entries", "expected an array");
  std::vector<Triplet> trips;
  trips.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string ew = where + "/entries/" + std::to_string(k);
    const json& e = entries[k];
    if (!e.is_array() || e.size() != 3) fail(ew, "expected [row, col, value]");
    const long long i = integer(e[0], ew + "/0");
    const long long j = integer(e[1], ew + "/1");
    if (i < 0 || i >= rows || j < 0 || j >= cols) fail(ew, "index out of range");
    trips.emplace_back(static_cast<int>(i), static_cast<int>(j), number(e[2], ew + "/2"));
  }
  SparseMatrix m(rows, cols);
  // Duplicates would be summed silently; reject them instead.
  m.setFromTriplets(trips.begin(), trips.end(), [&](double, double) -> double { fail(where, "duplicate entry"); });
  return m;
}

}  // namespace

json network_to_json(const Network& net) {
  json layers = json::array();
  for (const Layer& l : net.layers()) {
    const SparseMatrix& w = l.affine.weights;
    json layer;
    if (static_cast<long long>(w.rows()) * w.cols() <= kDenseEntryLimit) {
      layer["weights"] = dense_weights(w);
    } else {
      layer["weights_sparse"] = sparse_weights(w);
    }
    json bias = json::array();
    for (Eigen::Index i = 0; i < l.affine.bias.size(); ++i) bias.push_back(l.affine.bias(i));
    layer["bias"] = std::move(bias);
    layer["activated"] = l.activated;
    layers.push_back(std::move(layer));
  }
  return json{{"input_dim", net.input_dim()},
              {"activation", std::string(activation_name(net.activation()))},
              {"layers", std::move(layers)}};
}

Network network_from_json(const json& doc) {
  const long long input_dim = integer(member(doc, "input_dim", ""), "/input_dim");
  if (input_dim < 1) fail("/input_dim", "must be positive");
  const json& act_doc = member(doc, "activation", "");
  if (!act_doc.is_string()) fail("/activation", "expected a string");
  Activation act;
  try {
    act = parse_activation(act_doc.get<std::string>());
  } catch (const ConfigError& e) {
    fail("/activation", e.what());
  }
  const json& layers_doc = member(doc, "layers", "");
  if (!layers_doc.is_array() || layers_doc.empty()) fail("/layers", "expected a non-empty array");

  std::vector<Layer> layers;
  for (std::size_t k = 0; k < layers_doc.size(); ++k) {
    const std::string lw = "/layers/" + std::to_string(k);
    const json& ld = layers_doc[k];
    if (!ld.is_object()) fail(lw, "expected an object");
    SparseMatrix w;
    if (ld.contains("weights")) {
      w = read_dense(ld["weights"], lw + "/weights");
    } else if (ld.contains("weights_sparse")) {
      w = read_sparse(ld["weights_sparse"], lw + "/weights_sparse");
    } else {
      fail(lw, "missing \"weights\"");
    }
    const json& bias_doc = member(ld, "bias", lw);
    if (!bias_doc.is_array()) fail(lw + "/bias", "expected an array");
    Vector bias(static_cast<Eigen::Index>(bias_doc.size()));
    for (std::size_t i = 0; i < bias_doc.size(); ++i) {
      bias(static_cast<Eigen::Index>(i)) = number(bias_doc[i], lw + "/bias/" + std::to_string(i));
    }
    const json& act_flag = member(ld, "activated", lw);
    if (!act_flag.is_boolean()) fail(lw + "/activated", "expected a boolean");
    if (bias.size() != w.rows()) fail(lw + "/bias", "length differs from the number of weight rows");
    layers.push_back(Layer{AffineLayer(std::move(w), std::move(bias)), act_flag.get<bool>()});
  }
  try {
    return Network(static_cast<int>(input_dim), act, std::move(layers));
  } catch (const ShapeError& e) {
    fail("/layers", e.what());
  } catch (const DepthBudgetError& e) {
    fail("/layers", e.what());
  }
}

namespace {

void put_number(std::ostream& out, double v) { out << json(v).dump(); }

void put_weights_dense(std::ostream& out, const SparseMatrix& w) {
  const Matrix d(w);
  out << '[';
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    if (r) out << ',';
    out << '[';
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      if (c) out << ',';
      put_number(out, d(r, c));
    }
    out << ']';
  }
  out << ']';
}

void put_weights_sparse(std::ostream& out, const SparseMatrix& w) {
  out << "{\"cols\":" << w.cols() << ",\"entries\":[";
  bool first = true;
  for (int r = 0; r < w.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(w, r); it; ++it) {
      out << (first ? "[" : ",[") << it.row() << ',' << it.col() << ',';
      put_number(out, it.value());
      out << ']';
      first = false;
    }
  }
  out << "],\"rows\":" << w.rows() << '}';
}

}  // namespace

// Same bytes as network_to_json(net).dump() (keys in sorted order) without
// building the document, which for wide layers is many times the file size.
void write_network(const Network& net, std::ostream& out) {
  out << "{\"activation\":" << json(std::string(activation_name(net.activation()))).dump()
      << ",\"input_dim\":" << net.input_dim() << ",\"layers\":[";
  for (std::size_t k = 0; k < net.layers().size(); ++k) {
    const Layer& l = net.layers()[k];
    const SparseMatrix& w = l.affine.weights;
    out << (k ? "," : "") << "{\"activated\":" << (l.activated ? "true" : "false") << ",\"bias\":[";
    for (Eigen::Index i = 0; i < l.affine.bias.size(); ++i) {
      if (i) out << ',';
      put_number(out, l.affine.bias(i));
    }
    out << "],";
    if (static_cast<long long>(w.rows()) * w.cols() <= kDenseEntryLimit) {
      out << "\"weights\":";
      put_weights_dense(out, w);
    } else {
      out << "\"weights_sparse\":";
      put_weights_sparse(out, w);
    }
    out << '}';
  }
  out << "]}\n";
}

std::string serialize(const Network& net) {
  std::ostringstream out;
  write_network(net, out);
  return std::move(out).str();
}

Network deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("network document at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return network_from_json(doc);
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_network(net, out);
  if (!out) throw Error("failed writing " + path.string());
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return deserialize(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace sepnet
