#pragma once

#include <cstddef>
#include <span>

#include "dgfnc/fnn.hpp"

namespace dgfnc {

struct GrowthConfig {
  std::size_t r_max = 25;  // 0 disables growth
  double t_max = 0.9e-3;   // loop-time budget [s]
  double e_th = 1e-5;      // error normalizer
  double gamma_th = 0.1;   // coverage threshold
  double c_th = 0.02;      // add threshold
  double sigma_c = 2.0;    // width given to new nodes
  bool clamp_error_term = false;  // saturate C_e at 1 (off: C_e = err / e_th)

  void validate() const;
};

struct GrowthObservation {
  std::size_t r_cur = 0;
  double dt = 0.0;         // run time of the last control loop [s]
  double err = 0.0;        // |e|
  double gamma_max = 0.0;  // 0 when the network is empty

  void validate() const;
};

struct GrowthScore {
  double c_add = 0.0;
  double c_r = 0.0;
  double c_t = 0.0;
  double c_e = 0.0;
  double c_gamma = 0.0;
};

/// C_add = C_R * C_t * C_e * C_gamma. C_R and C_t are clamped below at zero.
GrowthScore add_score(const GrowthObservation& obs, const GrowthConfig& cfg);

/// Appends one node centred at z (width sigma_c, xi = 0) when the score
/// exceeds c_th and the cap allows it.
bool maybe_grow(FnnNetwork& network, std::span<const double> z, const GrowthObservation& obs,
                const GrowthConfig& cfg, GrowthScore* score_out = nullptr);

}  // namespace dgfnc
