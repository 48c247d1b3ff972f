// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/rlvr/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "vrlvr/error.hpp"
#include "vrlvr/rlvr/grpo.hpp"

namespace vrlvr::rlvr {

nlohmann::json config_to_json(const TrainConfig& c) {
  nlohmann::json tasks = nlohmann::json::array();
  for (Task t : c.tasks) tasks.push_back(task_name(t));
  return {{"K", c.K},
          {"L", c.L},
          {"G", c.G},
          {"eta", c.eta},
          {"clip_eps", c.clip_eps},
          {"beta", c.beta},
          {"lr", c.lr},
          {"momentum", c.momentum},
          {"iters", c.iters},
          {"reward_mode", reward_mode_name(c.reward_mode)},
          {"tasks", tasks},
          {"seed", c.seed},
          {"hidden", c.hidden},
          {"slots", c.slots},
          {"cond_dim", c.cond_dim},
          {"pool_size", c.pool_size},
          {"updates_per_iter", c.updates_per_iter},
          {"grad_clip", c.grad_clip},
          {"fit_steps", c.fit_steps},
          {"fit_lr", c.fit_lr},
          {"fit_batch", c.fit_batch},
          {"eval_samples", c.eval_samples},
          {"jobs", c.jobs}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "train config must be a JSON object");
  TrainConfig c;
  const nlohmann::json known = config_to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("K", c.K);
    get("L", c.L);
    get("G", c.G);
    get("eta", c.eta);
    get("clip_eps", c.clip_eps);
    get("beta", c.beta);
    get("lr", c.lr);
    get("momentum", c.momentum);
    get("iters", c.iters);
    get("seed", c.seed);
    get("hidden", c.hidden);
    get("slots", c.slots);
    get("cond_dim", c.cond_dim);
    get("pool_size", c.pool_size);
    get("updates_per_iter", c.updates_per_iter);
    get("grad_clip", c.grad_clip);
    get("fit_steps", c.fit_steps);
    get("fit_lr", c.fit_lr);
    get("fit_batch", c.fit_batch);
    get("eval_samples", c.eval_samples);
    get("jobs", c.jobs);
    if (j.contains("reward_mode")) c.reward_mode = reward_mode_from_name(j.at("reward_mode").get<std::string>());
    if (j.contains("tasks")) {
      c.tasks.clear();
      for (const auto& t : j.at("tasks")) c.tasks.push_back(task_from_name(t.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad train config: ") + e.what());
  }
  return c;
}

// ---- flow matching ---------------------------------------------------------------

std::vector<FitExample> fit_examples(std::span<const TaskInstance> instances, int cond_dim, int slots) {
  std::vector<FitExample> out;
  for (const auto& inst : instances) out.push_back({encode_condition(inst, cond_dim), target_latent(inst, slots)});
  return out;
}

namespace {

struct FmSample {
  std::size_t example;
  double t;
  std::vector<double> eps;
};

FmSample draw_sample(SeededRng& rng, std::size_t n_examples, int D) {
  FmSample s;
  s.example = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n_examples) - 1));
  s.t = rng.uniform01();
  s.eps.resize(D);
  for (double& e : s.eps) e = rng.normal();
  return s;
}

// Adds the batch-mean loss gradient to grad (if non-null); returns the loss.
double fm_batch(const ToyVelocityModel& model, std::span<const FitExample> data,
                const std::vector<FmSample>& batch, std::vector<double>* grad) {
  const int D = model.shape().latent_dim;
  const double scale = 1.0 / (double(D) * double(batch.size()));
  double loss = 0.0;
  ToyVelocityModel::Cache cache;
  std::vector<double> x(D), diff(D);
  for (const FmSample& s : batch) {
    const FitExample& ex = data[s.example];
    for (int d = 0; d < D; ++d) x[d] = (1.0 - s.t) * ex.target[d] + s.t * s.eps[d];
    const std::vector<double> v = model.forward(x, s.t, ex.cond, grad ? &cache : nullptr);
    for (int d = 0; d < D; ++d) {
      diff[d] = v[d] - (s.eps[d] - ex.target[d]);
      loss += diff[d] * diff[d] * scale;
      diff[d] *= 2.0 * scale;
    }
    if (grad) model.backward(cache, diff, *grad);
  }
  return loss;
}

}  // namespace

double flow_matching_loss(const ToyVelocityModel& model, std::span<const FitExample> data, int samples,
                          std::uint64_t seed) {
  if (data.empty()) throw Error(ErrorCode::InvalidArgument, "flow matching needs at least one example");
  SeededRng rng(seed);
  std::vector<FmSample> batch;
  for (int i = 0; i < samples; ++i) batch.push_back(draw_sample(rng, data.size(), model.shape().latent_dim));
  return fm_batch(model, data, batch, nullptr);
}

FitResult flow_matching_fit(ToyVelocityModel& model, std::span<const FitExample> data, const FitOptions& opts) {
  if (data.empty()) throw Error(ErrorCode::InvalidArgument, "flow matching needs at least one example");
  if (opts.batch < 1 || opts.steps < 0) throw Error(ErrorCode::InvalidArgument, "bad fit options");
  const int D = model.shape().latent_dim;
  for (const auto& ex : data) {
    if (int(ex.target.size()) != D) throw Error(ErrorCode::InvalidArgument, "target latent size mismatch");
  }
  const SeededRng root(opts.seed);
  const std::uint64_t probe_seed = root.child("probe").next_u64();
  SeededRng rng = root.child("train");
  MomentumSgd opt(model.param_count(), opts.lr, opts.momentum);
  std::vector<double> grad(model.param_count());
  FitResult result;
  auto probe = [&] {
    const double l = flow_matching_loss(model, data, 64, probe_seed);
    if (!std::isfinite(l)) throw Error(ErrorCode::DivergedLoss, "flow matching loss is not finite");
    result.probe_losses.push_back(l);
  };
  probe();
  for (int step = 1; step <= opts.steps; ++step) {
    std::vector<FmSample> batch;
    for (int b = 0; b < opts.batch; ++b) batch.push_back(draw_sample(rng, data.size(), D));
    std::fill(grad.begin(), grad.end(), 0.0);
    const double loss = fm_batch(model, data, batch, &grad);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::DivergedLoss, "flow matching loss diverged at step " + std::to_string(step));
    }
    opt.step(model.params(), grad);
    if (opts.log_every > 0 && step % opts.log_every == 0) probe();
  }
  return result;
}

// ---- GRPO objective ------------------------------------------------------------------

ObjectiveTerms grpo_objective(const ToyVelocityModel& model, const ToyVelocityModel& ref,
                              const LatentCondition& cond, const std::vector<RolloutRecord>& records,
                              std::span<const double> advantages, const DenoiseSchedule& schedule,
                              bool with_grad) {
  const int D = model.shape().latent_dim;
  const int L = schedule.early_cutoff;
  const double eps = schedule.clip_eps;
  const double beta = schedule.kl_beta;
  const double n_terms = double(records.size()) * L;
  ObjectiveTerms out;
  if (with_grad) out.grad.assign(model.param_count(), 0.0);
  ToyVelocityModel::Cache cache;
  std::vector<double> d_v(D);
  int clipped = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RolloutRecord& rec = records[i];
    const double A = advantages[i];
    for (int k = 0; k < L; ++k) {
      const double t = schedule.times[k], dt = schedule.dt(k), sigma = schedule.sigmas[k];
      const std::vector<double>& x = rec.states[k];
      const std::vector<double>& x_next = rec.states[k + 1];
      const std::vector<double> mu_new = ode_mean(x, dt, model.forward(x, t, cond.embedding, with_grad ? &cache : nullptr));
      const std::vector<double> mu_ref = ode_mean(x, dt, ref.forward(x, t, cond.embedding));
      const double lr = log_ratio(x_next, mu_new, rec.old_means[k], sigma);
      const double ratio = std::exp(lr);
      if (!std::isfinite(ratio) || !std::isfinite(A)) {
        throw Error(ErrorCode::NonFiniteRatio, "ratio exp(" + std::to_string(lr) + ") is not finite");
      }
      out.policy += clipped_surrogate(ratio, A, eps) / n_terms;
      out.kl += kl_penalty(mu_new, mu_ref, sigma) / n_terms;
      const double g_ratio = clipped_surrogate_grad(ratio, A, eps);
      if (g_ratio == 0.0 && A != 0.0) ++clipped;
      if (!with_grad) continue;
      const double inv = 1.0 / (sigma * sigma * D * n_terms);
      for (int d = 0; d < D; ++d) {
        const double g_mu = g_ratio * ratio * (x_next[d] - mu_new[d]) * inv + beta * (mu_new[d] - mu_ref[d]) * inv;
        d_v[d] = g_mu * dt;
      }
      model.backward(cache, d_v, out.grad);
    }
  }
  out.total = combined_objective(out.policy, out.kl, beta);
  out.clip_fraction = n_terms > 0 ? clipped / n_terms : 0.0;
  return out;
}

nlohmann::json metrics_to_json(const IterMetrics& m) {
  return {{"iter", m.iter},
          {"instance", m.instance_id},
          {"mean_reward", m.mean_reward},
          {"reward_std", m.reward_std},
          {"loss", m.loss},
          {"kl", m.kl},
          {"wall_ms", m.wall_ms}};
}

std::vector<IterMetrics> grpo_train(ToyVelocityModel& model, const ToyVelocityModel& ref,
                                    std::span<const TaskInstance> pool, const TrainConfig& cfg,
                                    const MetricsSink& sink) {
  if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "training pool is empty");
  if (cfg.G < 2) throw Error(ErrorCode::GroupTooSmall, "group size must be >= 2, got " + std::to_string(cfg.G));
  if (cfg.updates_per_iter < 1) throw Error(ErrorCode::InvalidArgument, "updates_per_iter must be >= 1");
  const DenoiseSchedule schedule = cfg.schedule();
  std::vector<LatentCondition> conds;
  for (const auto& inst : pool) conds.push_back(make_condition(inst, cfg.cond_dim, cfg.slots));

  MomentumSgd opt(model.param_count(), cfg.lr, cfg.momentum);
  const SeededRng root = SeededRng(cfg.seed).child("grpo");
  std::vector<IterMetrics> log;
  for (int it = 0; it < cfg.iters; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t idx = static_cast<std::size_t>(it) % pool.size();
    const std::uint64_t seed = root.child(static_cast<std::uint64_t>(it)).next_u64();
    const std::vector<RolloutRecord> records =
        rollout_group(model, conds[idx], schedule, cfg.G, seed, cfg.reward_mode, it, cfg.jobs);
    std::vector<double> rewards;
    for (const auto& r : records) rewards.push_back(r.reward);
    const std::vector<double> adv = group_advantages(rewards);

    IterMetrics m;
    m.iter = it;
    m.instance_id = pool[idx].id;
    for (double r : rewards) m.mean_reward += r / rewards.size();
    for (double r : rewards) m.reward_std += (r - m.mean_reward) * (r - m.mean_reward) / rewards.size();
    m.reward_std = std::sqrt(m.reward_std);
    for (int u = 0; u < cfg.updates_per_iter; ++u) {
      ObjectiveTerms obj = grpo_objective(model, ref, conds[idx], records, adv, schedule, true);
      double norm = 0.0;
      for (double g : obj.grad) norm += g * g;
      norm = std::sqrt(norm);
      if (!std::isfinite(obj.total) || !std::isfinite(norm)) {
        throw Error(ErrorCode::DivergedLoss, "GRPO objective diverged at iteration " + std::to_string(it));
      }
      if (u == 0) {
        m.loss = obj.total;
        m.kl = obj.kl;
      }
      if (cfg.grad_clip > 0.0 && norm > cfg.grad_clip)
        for (double& g : obj.grad) g *= cfg.grad_clip / norm;
      opt.step(model.params(), obj.grad);
    }
    m.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (sink) sink(m);
    log.push_back(std::move(m));
  }
  return log;
}

double evaluate_policy(const ToyVelocityModel& model, std::span<const TaskInstance> pool,
                       const TrainConfig& cfg, int samples, std::uint64_t seed, RewardMode mode) {
  if (pool.empty() || samples < 1) throw Error(ErrorCode::InvalidArgument, "nothing to evaluate");
  const DenoiseSchedule schedule = cfg.schedule();
  const SeededRng root = SeededRng(seed).child("eval");
  double total = 0.0;
  for (std::size_t p = 0; p < pool.size(); ++p) {
    const LatentCondition cond = make_condition(pool[p], cfg.cond_dim, cfg.slots);
    const SeededRng inst_rng = root.child(static_cast<std::uint64_t>(p));
    for (int s = 0; s < samples; ++s) {
      SeededRng rng = inst_rng.child(static_cast<std::uint64_t>(s));
      const RolloutRecord rec = sample_trajectory(model, cond, schedule, rng);
      total += score_latent(rec.states.back(), pool[p], mode);
    }
  }
  return total / (double(pool.size()) * samples);
}

// ---- toy problems ------------------------------------------------------------------

namespace {

std::string toy_id(const char* task, int i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "toy_%s_%02d", task, i);
  return buf;
}

}  // namespace

std::vector<TaskInstance> toy_maze_pool(int count, std::uint64_t seed) {
  std::vector<TaskInstance> out;
  std::set<std::string> seen;
  const SeededRng root = SeededRng(seed).child("toy_maze");
  for (std::uint64_t attempt = 0; int(out.size()) < count; ++attempt) {
    if (attempt > 1000u + 100u * count) throw Error(ErrorCode::GenerationExhausted, "too few distinct toy mazes");
    SizeOptions opts;
    opts.maze_n = 7;
    opts.carve = static_cast<CarveAlgorithm>(attempt % 3);
    opts.theme_id = "classic";
    opts.cell_px = 8;
    TaskInstance inst = generate_instance(Task::Maze, root.child(attempt).next_u64(), opts);
    const std::string key = walls_to_bits(inst.maze()) + actions_to_string(inst.gt_actions);
    if (inst.gt_actions.size() > std::size_t(kDefaultSlots) || !seen.insert(key).second) continue;
    inst.id = toy_id("maze", int(out.size()));
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> toy_flowfree_pool(int count, std::uint64_t seed) {
  std::vector<TaskInstance> out;
  const SeededRng root = SeededRng(seed).child("toy_flowfree");
  for (int i = 0; i < count; ++i) {
    SizeOptions opts;
    opts.flow_n = 4;
    opts.flow_colors = 2;
    opts.theme_id = "classic";
    opts.cell_px = 8;
    TaskInstance inst = generate_instance(Task::FlowFree, root.child(std::uint64_t(i)).next_u64(), opts);
    inst.id = toy_id("flowfree", i);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> toy_sokoban_pool(int count, std::uint64_t seed, int max_moves) {
  std::vector<TaskInstance> out;
  const SeededRng root = SeededRng(seed).child("toy_sokoban");
  for (std::uint64_t attempt = 0; int(out.size()) < count; ++attempt) {
    if (attempt > 1000u + 100u * count) throw Error(ErrorCode::GenerationExhausted, "too few short toy levels");
    SizeOptions opts;
    opts.sokoban_size = 6;
    opts.sokoban_boxes = 1;
    opts.theme_id = "classic";
    opts.cell_px = 8;
    TaskInstance inst = generate_instance(Task::Sokoban, root.child(attempt).next_u64(), opts);
    if (int(inst.gt_actions.size()) > max_moves) continue;
    inst.id = toy_id("sokoban", int(out.size()));
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> toy_pool(const TrainConfig& cfg) {
  std::vector<TaskInstance> pool;
  for (Task t : cfg.tasks) {
    std::vector<TaskInstance> part;
    switch (t) {
      case Task::Maze: part = toy_maze_pool(cfg.pool_size, cfg.seed); break;
      case Task::FlowFree: part = toy_flowfree_pool(cfg.pool_size, cfg.seed); break;
      case Task::Sokoban: part = toy_sokoban_pool(cfg.pool_size, cfg.seed, cfg.slots); break;
    }
    for (auto& inst : part) pool.push_back(std::move(inst));
  }
  return pool;
}

ToyRunResult run_toy_training(const TrainConfig& cfg, const MetricsSink& sink) {
  if (cfg.G < 2) throw Error(ErrorCode::GroupTooSmall, "group size must be >= 2, got " + std::to_string(cfg.G));
  (void)cfg.schedule();  // validates K, L, eta
  const std::vector<TaskInstance> pool = toy_pool(cfg);
  const SeededRng root(cfg.seed);

  ToyRunResult res;
  res.model = ToyVelocityModel(cfg.shape(), root.child("init").next_u64());
  FitOptions fit;
  fit.steps = cfg.fit_steps;
  fit.lr = cfg.fit_lr;
  fit.batch = cfg.fit_batch;
  fit.seed = root.child("fit").next_u64();
  const std::vector<FitExample> data = fit_examples(pool, cfg.cond_dim, cfg.slots);
  res.fit_losses = flow_matching_fit(res.model, data, fit).probe_losses;
  const ToyVelocityModel ref = res.model;

  const std::uint64_t eval_seed = root.child("eval").next_u64();
  res.reward_before = evaluate_policy(res.model, pool, cfg, cfg.eval_samples, eval_seed, RewardMode::Dense);
  res.success_before = evaluate_policy(res.model, pool, cfg, cfg.eval_samples, eval_seed, RewardMode::Sparse);
  res.metrics = grpo_train(res.model, ref, pool, cfg, sink);
  res.reward_after = evaluate_policy(res.model, pool, cfg, cfg.eval_samples, eval_seed, RewardMode::Dense);
  res.success_after = evaluate_policy(res.model, pool, cfg, cfg.eval_samples, eval_seed, RewardMode::Sparse);
  return res;
}

}  // namespace vrlvr::rlvr
