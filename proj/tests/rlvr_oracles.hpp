// SPDX-License-Identifier: Apache-2.0
// Test-side references for the GRPO objective: a direct double loop over
// (sample, step) written from the formulas, plus central differences.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "vrlvr/rlvr/trainer.hpp"

namespace rlo {

using namespace vrlvr;
using namespace vrlvr::rlvr;

inline std::vector<double> central_difference(const ToyVelocityModel& model,
                                              const std::function<double(const ToyVelocityModel&)>& f,
                                              double h) {
  std::vector<double> out(model.param_count());
  ToyVelocityModel probe = model;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double keep = probe.params()[i];
    probe.params()[i] = keep + h;
    const double up = f(probe);
    probe.params()[i] = keep - h;
    const double down = f(probe);
    probe.params()[i] = keep;
    out[i] = (up - down) / (2 * h);
  }
  return out;
}

inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

// 5x5 maze whose goal is the logical cell right of the start.
inline TaskInstance corridor_maze() {
  MazeBoard b;
  b.n = 5;
  b.walls.assign(25, 1);
  b.walls[1 * 5 + 1] = b.walls[1 * 5 + 2] = b.walls[1 * 5 + 3] = 0;
  b.start = {0, 0};
  b.goal = {0, 1};
  return make_maze_instance(b, 0, "classic", 8);
}

// Tiny rollout group with theta, theta_old and theta_ref all different.
struct SmallProblem {
  std::vector<TaskInstance> pool;
  LatentCondition cond;
  DenoiseSchedule schedule;
  ToyVelocityModel model_old, model, ref;
  std::vector<RolloutRecord> records;
  std::vector<double> advantages;

  explicit SmallProblem(std::uint64_t seed, int steps = 4, int cutoff = 2) {
    pool = toy_maze_pool(1, seed);
    cond = make_condition(pool[0], 6, 2);
    schedule = make_schedule(steps, cutoff, 0.7, 0.2, 0.04);
    model_old = ToyVelocityModel({8, 6, 5}, seed + 1);
    SeededRng rng(seed + 2);
    model = model_old;
    ref = model_old;
    for (double& p : model.params()) p += 0.01 * rng.normal();
    for (double& p : ref.params()) p += 0.02 * rng.normal();
    records = rollout_group(model_old, cond, schedule, 3, seed + 3, RewardMode::Dense);
    for (std::size_t i = 0; i < records.size(); ++i) advantages.push_back(rng.normal());
  }
};

inline double reference_objective(const SmallProblem& p, int L) {
  const int D = p.cond.latent_dim();
  double pol = 0, kl = 0;
  int n = 0;
  for (std::size_t i = 0; i < p.records.size(); ++i) {
    for (int k = 0; k < L; ++k) {
      const double t = p.schedule.times[k];
      const double dt = p.schedule.times[k + 1] - t;
      const double s2 = p.schedule.sigmas[k] * p.schedule.sigmas[k];
      const auto& x = p.records[i].states[k];
      const auto& y = p.records[i].states[k + 1];
      const auto& old = p.records[i].old_means[k];
      const auto v = p.model.forward(x, t, p.cond.embedding);
      const auto vr = p.ref.forward(x, t, p.cond.embedding);
      double sq = 0, dk = 0;
      for (int d = 0; d < D; ++d) {
        const double mn = x[d] + dt * v[d];
        const double mr = x[d] + dt * vr[d];
        sq += (y[d] - mn) * (y[d] - mn) - (y[d] - old[d]) * (y[d] - old[d]);
        dk += (mn - mr) * (mn - mr);
      }
      const double rho = std::exp(-sq / (2 * s2 * D));
      const double A = p.advantages[i];
      const double clipped = std::min(std::max(rho, 0.8), 1.2);
      pol += -std::min(rho * A, clipped * A);
      kl += dk / D / (2 * s2);
      ++n;
    }
  }
  return pol / n + 0.04 * kl / n;
}

// At theta = theta_old the policy gradient reduces to -A * grad log rho.
// Accumulates that direction plus the KL gradient and compares.
inline double reinforce_check(const SmallProblem& p, const ToyVelocityModel& at, const std::vector<double>& grad) {
  const int D = p.cond.latent_dim();
  const int L = p.schedule.early_cutoff;
  const double n = double(p.records.size()) * L;
  std::vector<double> expect(at.param_count(), 0.0);
  for (std::size_t i = 0; i < p.records.size(); ++i)
    for (int k = 0; k < L; ++k) {
      const double t = p.schedule.times[k];
      const double dt = p.schedule.times[k + 1] - t;
      const double s2 = p.schedule.sigmas[k] * p.schedule.sigmas[k];
      const auto& x = p.records[i].states[k];
      const auto& y = p.records[i].states[k + 1];
      ToyVelocityModel::Cache cache;
      const auto v = at.forward(x, t, p.cond.embedding, &cache);
      const auto vr = p.ref.forward(x, t, p.cond.embedding);
      std::vector<double> dv(D);
      for (int d = 0; d < D; ++d) {
        const double mn = x[d] + dt * v[d];
        const double mr = x[d] + dt * vr[d];
        const double dlog = (y[d] - mn) / (s2 * D);
        dv[d] = dt * (-p.advantages[i] * dlog + 0.04 * (mn - mr) / (s2 * D)) / n;
      }
      at.backward(cache, dv, expect);
    }
  return relative_error(grad, expect);
}

}  // namespace rlo
