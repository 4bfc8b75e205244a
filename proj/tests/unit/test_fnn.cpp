#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dgfnc/errors.hpp"
#include "dgfnc/fnn.hpp"
#include "test_support.hpp"

using namespace dgfnc;

namespace {

FuzzyNode make_node(std::vector<double> m, std::vector<double> sigma, double xi) {
  return FuzzyNode{std::move(m), std::move(sigma), xi};
}

}  // namespace

TEST_CASE("activation is one at the rule centre") {
  const auto node = make_node({0.3, -1.2, 4.0}, {0.5, 2.0, 7.0}, 1.0);
  const std::vector<double> z{0.3, -1.2, 4.0};
  CHECK(node_activation(node, z) == 1.0);
}

TEST_CASE("activation uses sigma squared in the denominator") {
  // Values from tests/oracles/derive_values.py
  const auto one_d = make_node({0.0}, {2.0}, 0.0);
  const std::vector<double> z1{1.0};
  CHECK(node_activation(one_d, z1) == doctest::Approx(0.77880078307140486825).epsilon(1e-15));

  const auto two_d = make_node({3.0, 3.0}, {1.0, 1.0}, 0.0);
  const std::vector<double> z2{0.0, 0.0};
  CHECK(node_activation(two_d, z2) == doctest::Approx(1.5229979744712628436e-8).epsilon(1e-14));
}

TEST_CASE("activation rejects bad inputs") {
  const auto node = make_node({0.0, 0.0}, {1.0, 1.0}, 0.0);
  const std::vector<double> short_z{1.0};
  CHECK_THROWS_AS(node_activation(node, short_z), ContractViolation);

  const auto flat = make_node({0.0}, {0.0}, 0.0);
  const std::vector<double> z{1.0};
  CHECK_THROWS_AS(node_activation(flat, z), ContractViolation);
  const auto negative = make_node({0.0}, {-1.0}, 0.0);
  CHECK_THROWS_AS(node_activation(negative, z), ContractViolation);

  FnnNetwork net(1);
  CHECK_THROWS_AS(net.add_node(negative), ContractViolation);
  CHECK_THROWS_AS(FnnNetwork(0), ContractViolation);
}

TEST_CASE("evaluate") {
  SUBCASE("empty network") {
    FnnNetwork net(2);
    const std::vector<double> z{4.0, -3.0};
    const auto out = evaluate(net, z);
    CHECK(out.u == 0.0);
    CHECK(out.gamma.empty());
    CHECK(out.gamma_max() == 0.0);
  }
  SUBCASE("single node at its centre returns xi") {
    FnnNetwork net(2, {make_node({1.0, 2.0}, {1.0, 1.0}, 5.0)});
    const std::vector<double> z{1.0, 2.0};
    CHECK(evaluate(net, z).u == 5.0);
  }
  SUBCASE("two one-dimensional nodes") {
    FnnNetwork net(1, {make_node({0.0}, {2.0}, 1.0), make_node({1.0}, {2.0}, -2.0)});
    const std::vector<double> z{1.0};
    const auto out = evaluate(net, z);
    CHECK(out.u == doctest::Approx(-1.2211992169285951318).epsilon(1e-15));
    REQUIRE(out.gamma.size() == 2);
    CHECK(out.gamma[1] == 1.0);
    CHECK(out.gamma_max() == 1.0);
  }
  SUBCASE("dimension mismatch") {
    FnnNetwork net(2);
    const std::vector<double> z{1.0};
    CHECK_THROWS_AS(evaluate(net, z), ContractViolation);
  }
}

TEST_CASE("network properties on random instances") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::size_t r = 1 + trial % 7;
    auto net = testing::random_network(rng, n, r, 3.0, 0.5);
    const auto z = testing::random_input(rng, n, 3.0);
    const auto out = evaluate(net, z);

    for (double g : out.gamma) {
      CHECK(g > 0.0);
      CHECK(g <= 1.0);
    }

    // Linear in xi.
    const double a = testing::uniform(rng, -4.0, 4.0);
    auto scaled = net;
    for (std::size_t k = 0; k < scaled.size(); ++k) scaled.node(k).xi *= a;
    CHECK(evaluate(scaled, z).u == doctest::Approx(a * out.u).epsilon(1e-12).scale(1.0));

    // Order of nodes does not matter.
    auto nodes = net.nodes();
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const FnnNetwork permuted(n, nodes);
    CHECK(evaluate(permuted, z).u == doctest::Approx(out.u).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("analytic partials agree with central differences") {
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 3;
    auto net = testing::random_network(rng, n, 1 + trial % 5, 5.0, 0.5);
    const auto z = testing::random_input(rng, n, 5.0);
    for (std::size_t k = 0; k < net.size(); ++k) {
      auto plus = net, minus = net;
      plus.node(k).xi += h;
      minus.node(k).xi -= h;
      const double fd_xi = (evaluate(plus, z).u - evaluate(minus, z).u) / (2 * h);
      const double an_xi = output_grad_xi(net, k, z);
      CHECK(std::abs(fd_xi - an_xi) <= 1e-6 * std::max(1.0, std::abs(an_xi)));

      for (std::size_t i = 0; i < n; ++i) {
        auto mp = net, mm = net;
        mp.node(k).m[i] += h;
        mm.node(k).m[i] -= h;
        const double fd_m = (evaluate(mp, z).u - evaluate(mm, z).u) / (2 * h);
        const double an_m = output_grad_m(net, k, i, z);
        CHECK(std::abs(fd_m - an_m) <= 1e-6 * std::max(1.0, std::abs(an_m)));
      }
    }
  }
}

TEST_CASE("serialization round trip") {
  SUBCASE("empty network") {
    const FnnNetwork net(3);
    const auto back = deserialize_network(serialize_network(net));
    CHECK(back.n() == 3);
    CHECK(back.empty());
  }
  SUBCASE("random networks survive bit-exactly") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
      auto net = testing::random_network(rng, 1 + trial % 4, trial % 9, 1e3, 1e-6);
      // Exercise awkward magnitudes too.
      if (net.size() > 0) net.node(0).xi = std::ldexp(testing::uniform(rng, -1, 1), trial - 100);
      const auto back = deserialize_network(serialize_network(net));
      CHECK(back == net);
    }
  }
}

TEST_CASE("deserialization errors name the field") {
  const auto field_of = [](const std::string& text) {
    try {
      deserialize_network(text);
    } catch (const ParseError& e) {
      return e.field();
    }
    return std::string("<no error>");
  };
  CHECK(field_of(R"({"n": 1, "nodes": [{"m": [0], "sigma": [0], "xi": 1}]})") == "nodes[0].sigma[0]");
  CHECK(field_of(R"({"n": 2, "nodes": [{"m": [0, 1], "sigma": [1, -2], "xi": 1}]})") == "nodes[0].sigma[1]");
  CHECK(field_of(R"({"n": 1, "nodes": [{"m": [0], "sigma": [1]}]})") == "nodes[0].xi");
  CHECK(field_of(R"({"n": 2, "nodes": [{"m": [0], "sigma": [1, 1], "xi": 0}]})") == "nodes[0].m");
  CHECK(field_of(R"({"n": 1, "R": 2, "nodes": [{"m": [0], "sigma": [1], "xi": 0}]})") == "R");
  CHECK(field_of(R"({"n": 0, "nodes": []})") == "n");
  CHECK(field_of(R"({"n": 1, "nodes": [], "extra": 1})") == "extra");
  CHECK(field_of(R"({"n": 1, "nodes": [{"m": [0], "sigma": [1], "xi": "big"}]})") == "nodes[0].xi");
  CHECK(field_of("{not json") == "document");
}
