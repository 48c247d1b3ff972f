// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace vrlvr::rlvr {

inline constexpr double kAdvantageEps = 1e-8;

/// mu = x + (t_next - t) * v.
std::vector<double> ode_mean(std::span<const double> x, double dt, std::span<const double> v);

/// One SDE transition: ode_mean + sigma * noise. With sigma = 0 this is the
/// deterministic Euler step.
std::vector<double> sde_step(std::span<const double> x, double dt, std::span<const double> v,
                             double sigma, std::span<const double> noise);

/// Dimension-normalized Gaussian log-ratio log pi_new(x_next) - log pi_old(x_next):
///   -1/(2 sigma^2) * 1/D * sum_d [(x_next - mu_new)_d^2 - (x_next - mu_old)_d^2].
/// Throws ZeroSigma for sigma <= 0.
double log_ratio(std::span<const double> x_next, std::span<const double> mu_new,
                 std::span<const double> mu_old, double sigma);

/// (R_i - mean) / (population std + 1e-8); all zeros when the std is 0.
/// Throws GroupTooSmall for fewer than two rewards.
std::vector<double> group_advantages(std::span<const double> rewards);

/// -min(rho * A, clip(rho, 1 - eps, 1 + eps) * A) for one (i, k) entry.
double clipped_surrogate(double ratio, double advantage, double eps);

/// d clipped_surrogate / d ratio: -A on the unclipped branch, 0 when the
/// clipped branch is the minimum.
double clipped_surrogate_grad(double ratio, double advantage, double eps);

/// Mean clipped surrogate over every (i, k) entry. log_ratios[i] holds the
/// per-step log-ratios of sample i. Throws NonFiniteRatio if exp overflows
/// or any input is NaN.
double policy_loss(const std::vector<std::vector<double>>& log_ratios,
                   std::span<const double> advantages, double eps);

/// 1/D * ||mu_new - mu_ref||^2 / (2 sigma^2) for one step. Throws ZeroSigma.
double kl_penalty(std::span<const double> mu_new, std::span<const double> mu_ref, double sigma);

inline double combined_objective(double policy, double kl, double beta) { return policy + beta * kl; }

}  // namespace vrlvr::rlvr
