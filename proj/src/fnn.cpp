#include "dgfnc/fnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dgfnc/errors.hpp"

namespace dgfnc {

namespace {

void check_input(std::size_t n, std::span<const double> z) {
  if (z.size() != n) {
    throw ContractViolation(fmt::format("input has dimension {}, network expects {}", z.size(), n));
  }
}

void append_array(std::string& out, const std::vector<double>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt::format("{:.17g}", values[i]);
  }
  out += ']';
}

std::vector<double> read_array(const nlohmann::json& j, const std::string& field, std::size_t n) {
  if (!j.is_array()) throw ParseError(field, "expected an array");
  if (j.size() != n) throw ParseError(field, fmt::format("expected {} entries, found {}", n, j.size()));
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_number()) throw ParseError(fmt::format("{}[{}]", field, i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

void check_keys(const nlohmann::json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

}  // namespace

FnnNetwork::FnnNetwork(std::size_t n) : n_(n) {
  if (n == 0) throw ContractViolation("network input dimension must be positive");
}

FnnNetwork::FnnNetwork(std::size_t n, std::vector<FuzzyNode> nodes) : FnnNetwork(n) {
  for (auto& node : nodes) add_node(std::move(node));
}

void FnnNetwork::add_node(FuzzyNode node) {
  validate_node(node, n_);
  nodes_.push_back(std::move(node));
}

double FnnOutput::gamma_max() const noexcept {
  if (gamma.empty()) return 0.0;
  return *std::max_element(gamma.begin(), gamma.end());
}

void validate_node(const FuzzyNode& node, std::size_t n) {
  if (node.m.size() != n || node.sigma.size() != n) {
    throw ContractViolation(fmt::format("node has dimension m={}, sigma={}; expected {}",
                                        node.m.size(), node.sigma.size(), n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(node.sigma[i] > 0.0) || !std::isfinite(node.sigma[i])) {
      throw ContractViolation(fmt::format("sigma[{}] = {} is not a positive width", i, node.sigma[i]));
    }
  }
}

double node_activation(const FuzzyNode& node, std::span<const double> z) {
  validate_node(node, z.size());
  double exponent = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - node.m[i];
    exponent += d * d / (node.sigma[i] * node.sigma[i]);
  }
  return std::exp(-exponent);
}

FnnOutput evaluate(const FnnNetwork& network, std::span<const double> z) {
  check_input(network.n(), z);
  FnnOutput out;
  out.gamma.reserve(network.size());
  for (const auto& node : network.nodes()) {
    const double g = node_activation(node, z);
    out.gamma.push_back(g);
    out.u += node.xi * g;
  }
  return out;
}

double output_grad_xi(const FnnNetwork& network, std::size_t k, std::span<const double> z) {
  check_input(network.n(), z);
  return node_activation(network.node(k), z);
}

double output_grad_m(const FnnNetwork& network, std::size_t k, std::size_t i,
                     std::span<const double> z) {
  check_input(network.n(), z);
  const auto& node = network.node(k);
  if (i >= network.n()) throw ContractViolation("input index out of range");
  const double s2 = node.sigma[i] * node.sigma[i];
  return node.xi * node_activation(node, z) * 2.0 * (z[i] - node.m[i]) / s2;
}

std::string serialize_network(const FnnNetwork& network) {
  std::string out = fmt::format("{{\n  \"n\": {},\n  \"R\": {},\n  \"nodes\": [", network.n(),
                                network.size());
  for (std::size_t k = 0; k < network.size(); ++k) {
    const auto& node = network.node(k);
    if (!std::isfinite(node.xi) ||
        !std::all_of(node.m.begin(), node.m.end(), [](double v) { return std::isfinite(v); })) {
      throw ContractViolation(fmt::format("node {} has non-finite parameters", k));
    }
    out += k ? ",\n    " : "\n    ";
    out += "{\"m\": ";
    append_array(out, node.m);
    out += ", \"sigma\": ";
    append_array(out, node.sigma);
    out += fmt::format(", \"xi\": {:.17g}}}", node.xi);
  }
  out += network.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

FnnNetwork deserialize_network(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  if (!doc.is_object()) throw ParseError("document", "expected an object");
  check_keys(doc, "", {"n", "R", "nodes"});

  if (!doc.contains("n")) throw ParseError("n", "missing");
  if (!doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() == 0) {
    throw ParseError("n", "expected a positive integer");
  }
  const auto n = doc["n"].get<std::size_t>();

  if (!doc.contains("nodes")) throw ParseError("nodes", "missing");
  const auto& nodes = doc["nodes"];
  if (!nodes.is_array()) throw ParseError("nodes", "expected an array");
  if (doc.contains("R")) {
    if (!doc["R"].is_number_unsigned()) throw ParseError("R", "expected a non-negative integer");
    if (doc["R"].get<std::size_t>() != nodes.size()) {
      throw ParseError("R", fmt::format("says {} but {} nodes are listed", doc["R"].get<std::size_t>(),
                                        nodes.size()));
    }
  }

  FnnNetwork network(n);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string where = fmt::format("nodes[{}]", k);
    const auto& j = nodes[k];
    if (!j.is_object()) throw ParseError(where, "expected an object");
    check_keys(j, where, {"m", "sigma", "xi"});
    for (const char* key : {"m", "sigma", "xi"}) {
      if (!j.contains(key)) throw ParseError(where + "." + key, "missing");
    }
    FuzzyNode node;
    node.m = read_array(j["m"], where + ".m", n);
    node.sigma = read_array(j["sigma"], where + ".sigma", n);
    if (!j["xi"].is_number()) throw ParseError(where + ".xi", "expected a number");
    node.xi = j["xi"].get<double>();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(node.sigma[i] > 0.0)) {
        throw ParseError(fmt::format("{}.sigma[{}]", where, i), "width must be > 0");
      }
    }
    network.add_node(std::move(node));
  }
  return network;
}

void save_network(const FnnNetwork& network, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize_network(network);
  if (!out) throw IoError("write failed: " + path);
}

FnnNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_network(buf.str());
}

}  // namespace dgfnc
