#include "vecsim/nn.hpp"

#include <cmath>

namespace vecsim::nn {

MlpNet MlpNet::create(const std::vector<int>& widths, std::mt19937_64& rng) {
  MlpNet net;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    Layer layer;
    const int in = widths[k], out = widths[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    layer.w.resize(in, out);
    for (int i = 0; i < in; ++i)
      for (int j = 0; j < out; ++j) layer.w(i, j) = dist(rng);
    layer.b = Vector::Zero(out);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Matrix MlpNet::forward(const Matrix& x) const {
  Matrix h = x;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    Matrix z = (h * layers[k].w).rowwise() + layers[k].b.transpose();
    if (k + 1 < layers.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Matrix MlpNet::forward(const Matrix& x, Cache& cache) const {
  cache.act.clear();
  cache.act.reserve(layers.size() + 1);
  cache.act.push_back(x);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    Matrix z =
        (cache.act.back() * layers[k].w).rowwise() + layers[k].b.transpose();
    if (k + 1 < layers.size()) z = z.cwiseMax(0.0);
    cache.act.push_back(std::move(z));
  }
  return cache.act.back();
}

Matrix MlpNet::backward(const Cache& cache, const Matrix& dLdy,
                        std::vector<Layer>& grads) const {
  Matrix delta = dLdy;
  for (std::size_t k = layers.size(); k-- > 0;) {
    if (k + 1 < layers.size()) {
      // gate through the ReLU that produced act[k+1]
      delta = delta.cwiseProduct(
          (cache.act[k + 1].array() > 0.0).cast<double>().matrix());
    }
    grads[k].w.noalias() += cache.act[k].transpose() * delta;
    grads[k].b.noalias() += delta.colwise().sum().transpose();
    if (k > 0) delta = delta * layers[k].w.transpose();
  }
  return delta * layers[0].w.transpose();
}

std::vector<Layer> MlpNet::zero_grads() const {
  std::vector<Layer> g;
  g.reserve(layers.size());
  for (const auto& layer : layers) {
    Layer z;
    z.w = Matrix::Zero(layer.w.rows(), layer.w.cols());
    z.b = Vector::Zero(layer.b.size());
    g.push_back(std::move(z));
  }
  return g;
}

std::size_t MlpNet::param_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers)
    n += static_cast<std::size_t>(layer.w.size() + layer.b.size());
  return n;
}

void MlpNet::flatten(std::vector<double>& out) const {
  out.clear();
  out.reserve(param_count());
  for (const auto& layer : layers) {
    out.insert(out.end(), layer.w.data(), layer.w.data() + layer.w.size());
    out.insert(out.end(), layer.b.data(), layer.b.data() + layer.b.size());
  }
}

void MlpNet::unflatten(const std::vector<double>& in) {
  std::size_t pos = 0;
  for (auto& layer : layers) {
    std::copy(in.begin() + pos, in.begin() + pos + layer.w.size(),
              layer.w.data());
    pos += layer.w.size();
    std::copy(in.begin() + pos, in.begin() + pos + layer.b.size(),
              layer.b.data());
    pos += layer.b.size();
  }
}

void Adam::init(const MlpNet& net) {
  t = 0;
  m = net.zero_grads();
  v = net.zero_grads();
}

void Adam::step(MlpNet& net, const std::vector<Layer>& grads) {
  ++t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    auto update = [&](auto& param, auto& mk, auto& vk, const auto& g) {
      mk = beta1 * mk + (1.0 - beta1) * g;
      vk = beta2 * vk + (1.0 - beta2) * g.cwiseProduct(g);
      param.array() -=
          lr * (mk.array() / c1) / ((vk.array() / c2).sqrt() + eps);
    };
    update(net.layers[k].w, m[k].w, v[k].w, grads[k].w);
    update(net.layers[k].b, m[k].b, v[k].b, grads[k].b);
  }
}

void AdamScalar::step(double& x, double grad) {
  ++t;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad * grad;
  const double mh = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
  const double vh = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
  x -= lr * mh / (std::sqrt(vh) + eps);
}

}  // namespace vecsim::nn
