// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/rlvr/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vrlvr/error.hpp"

namespace vrlvr::rlvr {

std::vector<double> ode_mean(std::span<const double> x, double dt, std::span<const double> v) {
  std::vector<double> mu(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) mu[d] = x[d] + dt * v[d];
  return mu;
}

std::vector<double> sde_step(std::span<const double> x, double dt, std::span<const double> v,
                             double sigma, std::span<const double> noise) {
  std::vector<double> next = ode_mean(x, dt, v);
  if (sigma != 0.0)
    for (std::size_t d = 0; d < next.size(); ++d) next[d] += sigma * noise[d];
  return next;
}

double log_ratio(std::span<const double> x_next, std::span<const double> mu_new,
                 std::span<const double> mu_old, double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::ZeroSigma, "log-ratio is undefined on a deterministic step");
  }
  double sum = 0.0;
  for (std::size_t d = 0; d < x_next.size(); ++d) {
    const double a = x_next[d] - mu_new[d];
    const double b = x_next[d] - mu_old[d];
    sum += a * a - b * b;
  }
  return -sum / (2.0 * sigma * sigma * static_cast<double>(x_next.size()));
}

std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2) {
    throw Error(ErrorCode::GroupTooSmall,
                "group advantages need G >= 2, got " + std::to_string(rewards.size()));
  }
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double std_pop = std::sqrt(var / n);
  std::vector<double> adv(rewards.size(), 0.0);
  if (std_pop == 0.0) return adv;
  for (std::size_t i = 0; i < rewards.size(); ++i) adv[i] = (rewards[i] - mean) / (std_pop + kAdvantageEps);
  return adv;
}

double clipped_surrogate(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return -std::min(ratio * advantage, clipped * advantage);
}

double clipped_surrogate_grad(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return ratio * advantage <= clipped * advantage ? -advantage : 0.0;
}

double policy_loss(const std::vector<std::vector<double>>& log_ratios,
                   std::span<const double> advantages, double eps) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < log_ratios.size(); ++i) {
    for (double lr : log_ratios[i]) {
      const double ratio = std::exp(lr);
      if (!std::isfinite(ratio) || !std::isfinite(advantages[i])) {
        throw Error(ErrorCode::NonFiniteRatio, "ratio exp(" + std::to_string(lr) + ") is not finite");
      }
      sum += clipped_surrogate(ratio, advantages[i], eps);
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double kl_penalty(std::span<const double> mu_new, std::span<const double> mu_ref, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::ZeroSigma, "KL is undefined on a deterministic step");
  double sq = 0.0;
  for (std::size_t d = 0; d < mu_new.size(); ++d) {
    const double diff = mu_new[d] - mu_ref[d];
    sq += diff * diff;
  }
  return sq / static_cast<double>(mu_new.size()) / (2.0 * sigma * sigma);
}

}  // namespace vrlvr::rlvr
