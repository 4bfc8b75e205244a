#include <doctest.h>

#include <cmath>
#include <random>

#include "dgfnc/adapt.hpp"
#include "dgfnc/errors.hpp"
#include "test_support.hpp"

using namespace dgfnc;

namespace {

AdaptStats step(FnnNetwork& net, const std::vector<double>& z, double s, const AdaptConfig& cfg) {
  const auto out = evaluate(net, z);
  return adapt_step(net, z, s, out.gamma, cfg);
}

}  // namespace

TEST_CASE("zero sliding value freezes parameters") {
  std::mt19937_64 rng(1);
  auto net = testing::random_network(rng, 2, 4);
  const auto before = net;
  step(net, {0.5, 0.5}, 0.0, AdaptConfig{});
  CHECK(net == before);
}

TEST_CASE("node at its centre") {
  AdaptConfig cfg;
  cfg.eta_xi = 2.0;
  cfg.eta_m = 3.0;
  cfg.update_dt = 0.01;
  FnnNetwork net(1, {FuzzyNode{{0.0}, {1.0}, 1.0}});
  step(net, {0.0}, 1.0, cfg);
  CHECK(net.node(0).xi == doctest::Approx(1.0 + 0.01 * 2.0));
  CHECK(net.node(0).m[0] == 0.0);
}

TEST_CASE("single step matches the reference values") {
  // Values from tests/oracles/derive_values.py
  FnnNetwork net(1, {FuzzyNode{{0.0}, {2.0}, 1.0}});
  const std::vector<double> z{1.0};
  AdaptConfig cfg;
  cfg.eta_m = 0.015;
  cfg.eta_xi = 0.015;
  cfg.update_dt = 1e-3;
  const auto stats = step(net, z, 0.5, cfg);
  CHECK(net.node(0).m[0] == doctest::Approx(2.9205029365177682559e-6).epsilon(1e-12));
  CHECK(net.node(0).xi - 1.0 == doctest::Approx(5.8410058730355365118e-6).epsilon(1e-9));
  CHECK(stats.max_abs_dm == doctest::Approx(2.9205029365177682559e-6).epsilon(1e-12));
}

TEST_CASE("centre update uses the weight from before the step") {
  FnnNetwork net(1, {FuzzyNode{{0.0}, {1.0}, 0.0}});
  AdaptConfig cfg;
  cfg.eta_xi = 100.0;
  cfg.eta_m = 100.0;
  step(net, {0.3}, 2.0, cfg);
  CHECK(net.node(0).xi != 0.0);
  CHECK(net.node(0).m[0] == 0.0);
}

TEST_CASE("widths never move") {
  std::mt19937_64 rng(5);
  auto net = testing::random_network(rng, 3, 6, 2.0, 0.3);
  const auto before = net;
  AdaptConfig cfg;
  cfg.eta_xi = 50.0;
  cfg.eta_m = 50.0;
  for (int i = 0; i < 1000; ++i) step(net, testing::random_input(rng, 3, 2.0), testing::uniform(rng, -1, 1), cfg);
  for (std::size_t k = 0; k < net.size(); ++k) CHECK(net.node(k).sigma == before.node(k).sigma);
}

TEST_CASE("updates scale linearly with s and the rates") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto base = testing::random_network(rng, 2, 3, 2.0, 0.5);
    const auto z = testing::random_input(rng, 2, 2.0);
    const double s = testing::uniform(rng, -2.0, 2.0);
    AdaptConfig cfg;

    auto a = base, b = base, c = base;
    step(a, z, s, cfg);
    step(b, z, 3.0 * s, cfg);
    auto fast = cfg;
    fast.eta_xi *= 3.0;
    fast.eta_m *= 3.0;
    step(c, z, s, fast);
    // Deltas sit far below the parameter magnitude, so allow for rounding of the sum.
    const auto near = [](double got, double want, double scale) {
      return std::abs(got - want) <= 1e-14 * (1.0 + std::abs(scale));
    };
    for (std::size_t k = 0; k < base.size(); ++k) {
      const double dxi = a.node(k).xi - base.node(k).xi;
      CHECK(near(b.node(k).xi - base.node(k).xi, 3.0 * dxi, base.node(k).xi));
      CHECK(near(c.node(k).xi - base.node(k).xi, 3.0 * dxi, base.node(k).xi));
      for (std::size_t i = 0; i < 2; ++i) {
        const double dm = a.node(k).m[i] - base.node(k).m[i];
        CHECK(near(b.node(k).m[i] - base.node(k).m[i], 3.0 * dm, base.node(k).m[i]));
        CHECK(near(c.node(k).m[i] - base.node(k).m[i], 3.0 * dm, base.node(k).m[i]));
      }
    }
  }
}

TEST_CASE("update direction follows the output gradient") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto net = testing::random_network(rng, 2, 3, 2.0, 0.5);
    const auto z = testing::random_input(rng, 2, 2.0);
    const auto before = net;
    step(net, z, 1.0, AdaptConfig{});
    for (std::size_t k = 0; k < net.size(); ++k) {
      const double g = output_grad_xi(before, k, z);
      CHECK((net.node(k).xi - before.node(k).xi) * g >= 0.0);
      for (std::size_t i = 0; i < 2; ++i) {
        const double gm = output_grad_m(before, k, i, z);
        CHECK((net.node(k).m[i] - before.node(k).m[i]) * gm >= 0.0);
      }
    }
  }
}

TEST_CASE("step clamp") {
  FnnNetwork net(1, {FuzzyNode{{0.0}, {1.0}, 1.0}});
  AdaptConfig cfg;
  cfg.eta_xi = 1e6;
  cfg.max_step = 0.25;
  const auto stats = step(net, {0.0}, 1.0, cfg);
  CHECK(net.node(0).xi == 1.25);
  CHECK(stats.max_abs_dxi == 0.25);
}

TEST_CASE("argument checks") {
  FnnNetwork net(1, {FuzzyNode{{0.0}, {1.0}, 1.0}});
  const std::vector<double> z{0.0};
  const std::vector<double> wrong_gamma{1.0, 1.0};
  CHECK_THROWS_AS(adapt_step(net, z, 1.0, wrong_gamma, AdaptConfig{}), ContractViolation);
  AdaptConfig bad;
  bad.update_dt = 0.0;
  const std::vector<double> gamma{1.0};
  CHECK_THROWS_AS(adapt_step(net, z, 1.0, gamma, bad), ContractViolation);
}
