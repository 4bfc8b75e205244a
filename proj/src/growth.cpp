#include "dgfnc/growth.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dgfnc/errors.hpp"

namespace dgfnc {

void GrowthConfig::validate() const {
  if (!(t_max > 0.0)) throw ContractViolation("growth.t_max must be positive");
  if (!(e_th > 0.0)) throw ContractViolation("growth.E_th must be positive");
  if (!(gamma_th > 0.0 && gamma_th < 1.0)) throw ContractViolation("growth.Gamma_th must lie in (0, 1)");
  if (!(c_th >= 0.0 && c_th <= 1.0)) throw ContractViolation("growth.C_th must lie in [0, 1]");
  if (!(sigma_c > 0.0)) throw ContractViolation("growth.sigma_c must be positive");
}

void GrowthObservation::validate() const {
  if (!(dt >= 0.0)) throw ContractViolation(fmt::format("observation dt = {} must be >= 0", dt));
  if (!(err >= 0.0)) throw ContractViolation(fmt::format("observation err = {} must be >= 0", err));
  if (!(gamma_max >= 0.0 && gamma_max <= 1.0)) {
    throw ContractViolation(fmt::format("observation gamma_max = {} outside [0, 1]", gamma_max));
  }
}

GrowthScore add_score(const GrowthObservation& obs, const GrowthConfig& cfg) {
  obs.validate();
  cfg.validate();
  GrowthScore s;
  // R_max = 0 disables growth outright.
  s.c_r = cfg.r_max == 0
              ? 0.0
              : std::max(0.0, 1.0 - static_cast<double>(obs.r_cur) / static_cast<double>(cfg.r_max));
  s.c_t = std::max(0.0, 1.0 - obs.dt / cfg.t_max);
  s.c_e = obs.err / cfg.e_th;
  if (cfg.clamp_error_term) s.c_e = std::min(s.c_e, 1.0);
  s.c_gamma = obs.gamma_max < cfg.gamma_th ? 1.0 : 0.0;
  s.c_add = s.c_r * s.c_t * s.c_e * s.c_gamma;
  return s;
}

bool maybe_grow(FnnNetwork& network, std::span<const double> z, const GrowthObservation& obs,
                const GrowthConfig& cfg, GrowthScore* score_out) {
  if (obs.r_cur != network.size()) {
    throw ContractViolation(fmt::format("observation R_cur = {} but network has {} nodes", obs.r_cur,
                                        network.size()));
  }
  if (z.size() != network.n()) throw ContractViolation("growth input has wrong dimension");

  const GrowthScore score = add_score(obs, cfg);
  if (score_out) *score_out = score;
  if (!(score.c_add > cfg.c_th) || network.size() >= cfg.r_max) return false;

  FuzzyNode node;
  node.m.assign(z.begin(), z.end());
  node.sigma.assign(network.n(), cfg.sigma_c);
  node.xi = 0.0;
  network.add_node(std::move(node));
  return true;
}

}  // namespace dgfnc
