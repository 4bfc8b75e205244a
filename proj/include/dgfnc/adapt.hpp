#pragma once

#include <span>

#include "dgfnc/fnn.hpp"

namespace dgfnc {

struct AdaptConfig {
  double eta_xi = 0.015;
  double eta_m = 0.015;
  double update_dt = 1e-3;  // Euler step, equal to the control period
  double max_step = 0.0;    // clamp on |delta| per parameter, 0 disables

  void validate() const;
};

struct AdaptStats {
  double max_abs_dxi = 0.0;
  double max_abs_dm = 0.0;
};

/// One explicit-Euler step of the online laws driven by the sliding value s:
///   xi_k  += dt * eta_xi * s * gamma_k
///   m_ik  += dt * eta_m  * s * xi_k * gamma_k * 2 (z_i - m_ik) / sigma_ik^2
/// The centre update uses the weights from before this step. Widths are
/// never touched.
AdaptStats adapt_step(FnnNetwork& network, std::span<const double> z, double s,
                      std::span<const double> gamma, const AdaptConfig& cfg);

}  // namespace dgfnc
