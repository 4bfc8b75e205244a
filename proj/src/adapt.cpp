#include "dgfnc/adapt.hpp"

#include <algorithm>
#include <cmath>

#include "dgfnc/errors.hpp"

namespace dgfnc {

void AdaptConfig::validate() const {
  if (!(eta_xi > 0.0)) throw ContractViolation("adapt.eta_xi must be positive");
  if (!(eta_m > 0.0)) throw ContractViolation("adapt.eta_m must be positive");
  if (!(update_dt > 0.0)) throw ContractViolation("adapt.update_dt must be positive");
  if (!(max_step >= 0.0)) throw ContractViolation("adapt.max_step must be >= 0");
}

AdaptStats adapt_step(FnnNetwork& network, std::span<const double> z, double s,
                      std::span<const double> gamma, const AdaptConfig& cfg) {
  cfg.validate();
  if (z.size() != network.n()) throw ContractViolation("adaptation input has wrong dimension");
  if (gamma.size() != network.size()) {
    throw ContractViolation("firing strengths do not match the network size");
  }
  const auto limit = [&](double d) {
    return cfg.max_step > 0.0 ? std::clamp(d, -cfg.max_step, cfg.max_step) : d;
  };

  AdaptStats stats;
  for (std::size_t k = 0; k < network.size(); ++k) {
    auto& node = network.node(k);
    const double xi_old = node.xi;
    const double dxi = limit(cfg.update_dt * cfg.eta_xi * s * gamma[k]);
    node.xi += dxi;
    stats.max_abs_dxi = std::max(stats.max_abs_dxi, std::abs(dxi));

    const double common = cfg.update_dt * cfg.eta_m * s * xi_old * gamma[k];
    for (std::size_t i = 0; i < network.n(); ++i) {
      const double dm =
          limit(common * 2.0 * (z[i] - node.m[i]) / (node.sigma[i] * node.sigma[i]));
      node.m[i] += dm;
      stats.max_abs_dm = std::max(stats.max_abs_dm, std::abs(dm));
    }
  }
  return stats;
}

}  // namespace dgfnc
