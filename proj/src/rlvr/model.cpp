// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/rlvr/model.hpp"

#include <cmath>
#include <numbers>

#include "vrlvr/error.hpp"
#include "vrlvr/rng.hpp"

namespace vrlvr::rlvr {

std::vector<double> time_embedding(double t) {
  const double pi = std::numbers::pi;
  return {t,
          std::sin(pi * t), std::cos(pi * t),
          std::sin(2 * pi * t), std::cos(2 * pi * t),
          std::sin(4 * pi * t), std::cos(4 * pi * t)};
}

ToyVelocityModel::ToyVelocityModel(const ModelShape& shape, std::uint64_t seed) : shape_(shape) {
  if (shape.latent_dim < 1 || shape.cond_dim < 0 || shape.hidden < 1) {
    throw Error(ErrorCode::InvalidArgument, "model dimensions must be positive");
  }
  params_.assign(b2() + shape.latent_dim, 0.0);
  SeededRng rng(seed);
  const double s1 = 1.0 / std::sqrt(double(shape.input_dim()));
  const double s2 = 1.0 / std::sqrt(double(shape.hidden));
  for (std::size_t i = w1(); i < b1(); ++i) params_[i] = s1 * rng.normal();
  for (std::size_t i = w2(); i < b2(); ++i) params_[i] = s2 * rng.normal();
}

std::vector<double> ToyVelocityModel::forward(std::span<const double> x, double t,
                                              std::span<const double> cond, Cache* cache) const {
  const int D = shape_.latent_dim, H = shape_.hidden, In = shape_.input_dim();
  if (int(x.size()) != D || int(cond.size()) != shape_.cond_dim) {
    throw Error(ErrorCode::InvalidArgument, "model input has the wrong dimension");
  }
  std::vector<double> in;
  in.reserve(In);
  in.insert(in.end(), x.begin(), x.end());
  const std::vector<double> te = time_embedding(t);
  in.insert(in.end(), te.begin(), te.end());
  in.insert(in.end(), cond.begin(), cond.end());

  std::vector<double> h(H);
  const double* W1 = &params_[w1()];
  for (int j = 0; j < H; ++j) {
    double a = params_[b1() + j];
    const double* row = W1 + std::size_t(j) * In;
    for (int i = 0; i < In; ++i) a += row[i] * in[i];
    h[j] = std::tanh(a);
  }
  std::vector<double> out(D);
  const double* W2 = &params_[w2()];
  for (int d = 0; d < D; ++d) {
    double a = params_[b2() + d];
    const double* row = W2 + std::size_t(d) * H;
    for (int j = 0; j < H; ++j) a += row[j] * h[j];
    out[d] = a;
  }
  if (cache) {
    cache->input = std::move(in);
    cache->hidden = std::move(h);
  }
  return out;
}

void ToyVelocityModel::backward(const Cache& cache, std::span<const double> d_out,
                                std::span<double> grad) const {
  const int D = shape_.latent_dim, H = shape_.hidden, In = shape_.input_dim();
  std::vector<double> dh(H, 0.0);
  const double* W2 = &params_[w2()];
  for (int d = 0; d < D; ++d) {
    const double g = d_out[d];
    if (g == 0.0) continue;
    grad[b2() + d] += g;
    double* gw = &grad[w2() + std::size_t(d) * H];
    const double* row = W2 + std::size_t(d) * H;
    for (int j = 0; j < H; ++j) {
      gw[j] += g * cache.hidden[j];
      dh[j] += g * row[j];
    }
  }
  for (int j = 0; j < H; ++j) {
    const double da = dh[j] * (1.0 - cache.hidden[j] * cache.hidden[j]);
    if (da == 0.0) continue;
    grad[b1() + j] += da;
    double* gw = &grad[w1() + std::size_t(j) * In];
    for (int i = 0; i < In; ++i) gw[i] += da * cache.input[i];
  }
}

void MomentumSgd::step(std::vector<double>& params, std::span<const double> grad) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    vel_[i] = mu_ * vel_[i] + grad[i];
    params[i] -= lr_ * vel_[i];
  }
}

}  // namespace vrlvr::rlvr
