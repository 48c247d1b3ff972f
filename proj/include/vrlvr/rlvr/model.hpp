// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vrlvr::rlvr {

inline constexpr int kTimeFeatures = 7;

struct ModelShape {
  int latent_dim = 64;  // D
  int cond_dim = 64;
  int hidden = 64;

  int input_dim() const { return latent_dim + kTimeFeatures + cond_dim; }
  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

/// [t, sin(pi t), cos(pi t), sin(2 pi t), cos(2 pi t), sin(4 pi t), cos(4 pi t)]
std::vector<double> time_embedding(double t);

/// v = W2 tanh(W1 [x, emb(t), c] + b1) + b2 over one flat parameter vector.
class ToyVelocityModel {
 public:
  struct Cache {
    std::vector<double> input;
    std::vector<double> hidden;  // post-tanh
  };

  ToyVelocityModel() = default;
  ToyVelocityModel(const ModelShape& shape, std::uint64_t seed);

  const ModelShape& shape() const { return shape_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  std::vector<double> forward(std::span<const double> x, double t, std::span<const double> cond,
                              Cache* cache = nullptr) const;

  /// Adds d(loss)/d(theta) to grad given d(loss)/d(v) for the forward pass
  /// that filled `cache`.
  void backward(const Cache& cache, std::span<const double> d_out, std::span<double> grad) const;

 private:
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return w1() + std::size_t(shape_.hidden) * shape_.input_dim(); }
  std::size_t w2() const { return b1() + shape_.hidden; }
  std::size_t b2() const { return w2() + std::size_t(shape_.latent_dim) * shape_.hidden; }

  ModelShape shape_;
  std::vector<double> params_;
};

/// Plain gradient descent with optional heavy-ball momentum.
class MomentumSgd {
 public:
  MomentumSgd(std::size_t n, double lr, double momentum) : lr_(lr), mu_(momentum), vel_(n, 0.0) {}
  void step(std::vector<double>& params, std::span<const double> grad);

 private:
  double lr_;
  double mu_;
  std::vector<double> vel_;
};

}  // namespace vrlvr::rlvr
