// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/rlvr/schedule.hpp"

#include <cmath>
#include <string>

#include "vrlvr/error.hpp"

namespace vrlvr::rlvr {

DenoiseSchedule make_schedule(int steps, int early_cutoff, double eta, double clip_eps,
                              double kl_beta) {
  if (steps < 1 || early_cutoff < 1 || early_cutoff > steps) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= L <= K, got K=" + std::to_string(steps) +
                                                " L=" + std::to_string(early_cutoff));
  }
  if (eta < 0.0 || clip_eps < 0.0 || kl_beta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "eta, clip_eps and kl_beta must be non-negative");
  }
  DenoiseSchedule s;
  s.steps = steps;
  s.early_cutoff = early_cutoff;
  s.eta = eta;
  s.clip_eps = clip_eps;
  s.kl_beta = kl_beta;
  s.times.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) s.times[k] = 1.0 - double(k) / steps;
  s.times[steps] = 0.0;
  s.sigmas.assign(steps, 0.0);
  for (int k = 0; k < early_cutoff; ++k)
    s.sigmas[k] = eta * std::sqrt(s.times[k]) * std::sqrt(s.times[k] - s.times[k + 1]);
  return s;
}

}  // namespace vrlvr::rlvr
