// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace vrlvr::rlvr {

/// Linear time grid from t=1 (noise) to t=0 (data) over K steps. Step k
/// (0-based here) moves from times[k] to times[k+1] with standard deviation
/// sigmas[k]; sigmas are zero from step L on (Early-Step Focus).
struct DenoiseSchedule {
  int steps = 20;          // K
  int early_cutoff = 10;   // L
  double eta = 0.7;
  double clip_eps = 0.2;
  double kl_beta = 0.04;
  std::vector<double> times;   // K + 1 entries, strictly decreasing
  std::vector<double> sigmas;  // K entries

  double dt(int k) const { return times[k + 1] - times[k]; }
  bool stochastic(int k) const { return sigmas[k] > 0.0; }
};

/// sigma_k = eta * sqrt(t_k) * sqrt(t_k - t_{k+1}) for k < L, else 0.
/// Throws InvalidArgument unless 1 <= L <= K and eta >= 0.
DenoiseSchedule make_schedule(int steps = 20, int early_cutoff = 10, double eta = 0.7,
                              double clip_eps = 0.2, double kl_beta = 0.04);

}  // namespace vrlvr::rlvr
