#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace vecsim::nn {

using Matrix = Eigen::MatrixXd;  // rows are batch samples
using Vector = Eigen::VectorXd;

struct Layer {
  Matrix w;  // in x out
  Vector b;  // out
};

// Fully connected net with ReLU on hidden layers, linear output.
struct MlpNet {
  std::vector<Layer> layers;

  // Weights uniform in +-1/sqrt(fan_in), biases zero.
  static MlpNet create(const std::vector<int>& widths, std::mt19937_64& rng);

  int input_dim() const { return static_cast<int>(layers.front().w.rows()); }
  int output_dim() const { return static_cast<int>(layers.back().w.cols()); }

  Matrix forward(const Matrix& x) const;

  struct Cache {
    std::vector<Matrix> act;  // act[0] = input, act[k] = post-activation
  };
  Matrix forward(const Matrix& x, Cache& cache) const;

  // dLdy is dL/d(output); accumulates parameter gradients into `grads`
  // (same shapes, pre-zeroed or fresh from zero_grads) and returns dL/dx.
  Matrix backward(const Cache& cache, const Matrix& dLdy,
                  std::vector<Layer>& grads) const;

  std::vector<Layer> zero_grads() const;

  std::size_t param_count() const;
  void flatten(std::vector<double>& out) const;
  void unflatten(const std::vector<double>& in);
};

struct Adam {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  std::vector<Layer> m, v;

  void init(const MlpNet& net);
  void step(MlpNet& net, const std::vector<Layer>& grads);
};

struct AdamScalar {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  double m = 0.0, v = 0.0;

  void step(double& x, double grad);
};

}  // namespace vecsim::nn
