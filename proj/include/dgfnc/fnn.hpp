#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgfnc {

/// One fuzzy rule: Gaussian membership per input (center m, width sigma)
/// and a consequent weight xi.
struct FuzzyNode {
  std::vector<double> m;
  std::vector<double> sigma;
  double xi = 0.0;

  std::size_t dim() const noexcept { return m.size(); }
  bool operator==(const FuzzyNode&) const = default;
};

/// Three-layer Gaussian fuzzy neural network with a single output.
/// Nodes are kept in insertion order.
class FnnNetwork {
 public:
  explicit FnnNetwork(std::size_t n);
  FnnNetwork(std::size_t n, std::vector<FuzzyNode> nodes);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const std::vector<FuzzyNode>& nodes() const noexcept { return nodes_; }
  const FuzzyNode& node(std::size_t k) const { return nodes_.at(k); }
  FuzzyNode& node(std::size_t k) { return nodes_.at(k); }

  /// Appends a node after checking its dimension and widths.
  void add_node(FuzzyNode node);

  bool operator==(const FnnNetwork&) const = default;

 private:
  std::size_t n_;
  std::vector<FuzzyNode> nodes_;
};

struct FnnOutput {
  double u = 0.0;
  std::vector<double> gamma;  // firing strength per node, same order as nodes()

  double gamma_max() const noexcept;
};

/// Throws ContractViolation unless node has dimension n and all sigma > 0.
void validate_node(const FuzzyNode& node, std::size_t n);

/// Rule firing strength prod_i exp(-(z_i - m_i)^2 / sigma_i^2).
/// The denominator is sigma^2, not 2 sigma^2.
double node_activation(const FuzzyNode& node, std::span<const double> z);

FnnOutput evaluate(const FnnNetwork& network, std::span<const double> z);

// Analytic partials of the network output, used by the adaptation law and
// checked against finite differences in tests.
double output_grad_xi(const FnnNetwork& network, std::size_t k, std::span<const double> z);
double output_grad_m(const FnnNetwork& network, std::size_t k, std::size_t i,
                     std::span<const double> z);

/// JSON document {"n", "R", "nodes": [{"m", "sigma", "xi"}]} with reals
/// written at 17 significant digits.
std::string serialize_network(const FnnNetwork& network);
FnnNetwork deserialize_network(std::string_view text);

void save_network(const FnnNetwork& network, const std::string& path);
FnnNetwork load_network(const std::string& path);

}  // namespace dgfnc
