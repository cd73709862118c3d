#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vecsim/nn.hpp"

using namespace vecsim;
using nn::Matrix;

namespace {

// 0.5 * sum of squares of the outputs; gradient w.r.t. y is y itself.
double half_sq(const Matrix& y) { return 0.5 * y.array().square().sum(); }

}  // namespace

TEST_CASE("construction and shapes") {
  std::mt19937_64 rng(1);
  auto net = nn::MlpNet::create({4, 8, 3}, rng);
  REQUIRE(net.layers.size() == 2);
  CHECK(net.input_dim() == 4);
  CHECK(net.output_dim() == 3);
  CHECK(net.param_count() == 4 * 8 + 8 + 8 * 3 + 3);
  for (const auto& l : net.layers) {
    CHECK(l.b.isZero());
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.w.rows()));
    CHECK(l.w.maxCoeff() <= bound);
    CHECK(l.w.minCoeff() >= -bound);
    CHECK(l.w.cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("forward pass by hand") {
  nn::MlpNet net;
  net.layers.resize(2);
  net.layers[0].w.resize(2, 2);
  net.layers[0].w << 1.0, -1.0, 2.0, 1.0;
  net.layers[0].b.resize(2);
  net.layers[0].b << 0.0, -3.0;
  net.layers[1].w.resize(2, 1);
  net.layers[1].w << 1.0, 2.0;
  net.layers[1].b.resize(1);
  net.layers[1].b << 0.5;

  Matrix x(1, 2);
  x << 1.0, 1.0;
  // hidden pre-act: (1+2, -1+1-3) = (3, -3); ReLU -> (3, 0); out = 3 + 0.5
  const Matrix y = net.forward(x);
  CHECK(y(0, 0) == doctest::Approx(3.5));

  x << -1.0, 0.0;
  // hidden: (-1, -2) -> (0, 0); out = 0.5
  CHECK(net.forward(x)(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("backward matches central finite differences") {
  std::mt19937_64 rng(7);
  auto net = nn::MlpNet::create({5, 8, 8, 3}, rng);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix x(4, 5);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 5; ++c) x(r, c) = nd(rng);

  nn::MlpNet::Cache cache;
  const Matrix y = net.forward(x, cache);
  auto grads = net.zero_grads();
  const Matrix dx = net.backward(cache, y, grads);

  SUBCASE("parameter gradients") {
    std::vector<double> theta, gflat;
    net.flatten(theta);
    for (const auto& g : grads) {
      for (int c = 0; c < g.w.cols(); ++c)
        for (int r = 0; r < g.w.rows(); ++r) gflat.push_back(g.w(r, c));
      for (int i = 0; i < g.b.size(); ++i) gflat.push_back(g.b(i));
    }
    REQUIRE(gflat.size() == theta.size());

    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      auto tp = theta;
      tp[k] += h;
      net.unflatten(tp);
      const double lp = half_sq(net.forward(x));
      tp[k] -= 2 * h;
      net.unflatten(tp);
      const double lm = half_sq(net.forward(x));
      const double fd = (lp - lm) / (2 * h);
      const double scale = std::max({1.0, std::abs(fd), std::abs(gflat[k])});
      worst = std::max(worst, std::abs(fd - gflat[k]) / scale);
    }
    net.unflatten(theta);
    CHECK(worst < 1e-6);
  }

  SUBCASE("input gradients") {
    const double h = 1e-6;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 5; ++c) {
        Matrix xp = x, xm = x;
        xp(r, c) += h;
        xm(r, c) -= h;
        const double fd = (half_sq(net.forward(xp)) - half_sq(net.forward(xm))) / (2 * h);
        CHECK(dx(r, c) == doctest::Approx(fd).epsilon(1e-5));
      }
  }

  SUBCASE("backward accumulates into existing gradients") {
    auto acc = net.zero_grads();
    net.backward(cache, y, acc);
    net.backward(cache, y, acc);
    for (std::size_t l = 0; l < acc.size(); ++l) {
      CHECK((acc[l].w - 2.0 * grads[l].w).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((acc[l].b - 2.0 * grads[l].b).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("flatten round trip") {
  std::mt19937_64 rng(9);
  auto net = nn::MlpNet::create({3, 4, 2}, rng);
  std::vector<double> theta;
  net.flatten(theta);
  auto copy = nn::MlpNet::create({3, 4, 2}, rng);  // different draw
  copy.unflatten(theta);
  std::vector<double> theta2;
  copy.flatten(theta2);
  CHECK(theta == theta2);
  Matrix x(1, 3);
  x << 0.3, -0.2, 0.9;
  CHECK(net.forward(x) == copy.forward(x));
}

TEST_CASE("Adam") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    std::mt19937_64 rng(11);
    auto net = nn::MlpNet::create({3, 4, 2}, rng);
    std::vector<double> before;
    net.flatten(before);
    nn::Adam opt;
    opt.init(net);
    opt.step(net, net.zero_grads());
    std::vector<double> after;
    net.flatten(after);
    CHECK(before == after);
    CHECK(opt.t == 1);
  }

  SUBCASE("first scalar step is lr * g / (|g| + eps)") {
    nn::AdamScalar opt;
    opt.lr = 0.1;
    double x = 1.0;
    opt.step(x, 2.0);
    CHECK(x == doctest::Approx(1.0 - 0.1 * 2.0 / (2.0 + 1e-8)).epsilon(1e-12));
  }

  SUBCASE("descends a quadratic") {
    nn::AdamScalar opt;
    opt.lr = 0.05;
    double x = 3.0;
    for (int k = 0; k < 400; ++k) opt.step(x, 2.0 * (x - 1.0));
    CHECK(std::abs(x - 1.0) < 1e-2);
  }

  SUBCASE("net step matches scalar recursion coordinatewise") {
    std::mt19937_64 rng(13);
    auto net = nn::MlpNet::create({2, 3, 1}, rng);
    std::vector<double> theta;
    net.flatten(theta);

    // constant synthetic gradient of ones
    auto grads = net.zero_grads();
    for (auto& g : grads) {
      g.w.setOnes();
      g.b.setOnes();
    }
    nn::Adam opt;
    opt.lr = 0.01;
    opt.init(net);
    opt.step(net, grads);
    opt.step(net, grads);

    std::vector<double> got;
    net.flatten(got);
    for (std::size_t k = 0; k < theta.size(); ++k) {
      nn::AdamScalar s;
      s.lr = 0.01;
      double x = theta[k];
      s.step(x, 1.0);
      s.step(x, 1.0);
      CHECK(got[k] == doctest::Approx(x).epsilon(1e-12));
    }
  }
}
