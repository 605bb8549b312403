#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "arena/core/error.hpp"
#include "arena/core/rng.hpp"
#include "arena/numcore/adam.hpp"
#include "arena/numcore/gaussian.hpp"
#include "arena/numcore/mlp.hpp"

using namespace arena;
using namespace arena::numcore;

namespace {

using Matrix = std::vector<std::vector<double>>;

// Straight-line dense forward pass over explicitly extracted matrices.
std::vector<double> dense_oracle(const MlpParams& p, const std::vector<double>& x0) {
  std::vector<double> x = x0;
  for (std::size_t k = 0; k < p.layer_count(); ++k) {
    const auto shape = p.layers()[k];
    Matrix w(shape.out, std::vector<double>(shape.in));
    for (std::size_t o = 0; o < shape.out; ++o)
      for (std::size_t i = 0; i < shape.in; ++i) w[o][i] = p.weights(k)[o * shape.in + i];
    std::vector<double> y(shape.out);
    for (std::size_t o = 0; o < shape.out; ++o) {
      long double acc = p.bias(k)[o];
      for (std::size_t i = 0; i < shape.in; ++i) acc += static_cast<long double>(w[o][i]) * x[i];
      y[o] = shape.activation == Activation::Tanh ? std::tanh(static_cast<double>(acc))
                                                  : static_cast<double>(acc);
    }
    x = y;
  }
  return x;
}

MlpParams random_net(Rng& rng, std::size_t max_layers, std::size_t max_units) {
  std::size_t in = 1 + rng.below(max_units);
  std::size_t n_hidden = rng.below(max_layers);  // total layers <= max_layers
  std::vector<std::size_t> hidden;
  for (std::size_t i = 0; i < n_hidden; ++i) hidden.push_back(1 + rng.below(max_units));
  std::size_t out = 1 + rng.below(4);
  MlpParams p = make_mlp(in, hidden, out, 1.0, 1.0, rng);
  for (std::size_t k = 0; k < p.layer_count(); ++k)
    for (double& b : p.bias(k)) b = rng.uniform(-0.5, 0.5);
  return p;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-6, std::abs(a) + std::abs(b)); }

}  // namespace

TEST_CASE("mlp_forward: zero network maps anything to zero") {
  MlpParams p({{3, 4, Activation::Tanh}, {4, 2, Activation::Tanh}});
  auto y = mlp_forward(p, std::vector<double>{1.0, -7.0, 3.5});
  CHECK(y == std::vector<double>{0.0, 0.0});
}

TEST_CASE("mlp_forward: identity linear layer") {
  MlpParams p({{2, 2, Activation::Identity}});
  p.weights(0)[0] = 1.0;
  p.weights(0)[3] = 1.0;
  CHECK(mlp_forward(p, std::vector<double>{1.0, 2.0}) == std::vector<double>{1.0, 2.0});
}

TEST_CASE("mlp_forward: random 3-layer nets match the dense oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> hidden{1 + rng.below(16), 1 + rng.below(16)};
    std::size_t in = 1 + rng.below(8);
    MlpParams p = make_mlp(in, hidden, 3, 1.0, 1.0, rng);
    std::vector<double> x(in);
    for (double& v : x) v = rng.uniform(-2, 2);
    auto got = mlp_forward(p, x);
    auto want = dense_oracle(p, x);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(rel_err(got[i], want[i]) < 1e-12);
  }
}

TEST_CASE("mlp_forward: shape errors name the layer") {
  CHECK_THROWS_AS(MlpParams({{3, 4, Activation::Tanh}, {5, 2, Activation::Tanh}}), ShapeError);
  MlpParams p({{3, 4, Activation::Tanh}});
  try {
    mlp_forward(p, std::vector<double>{1.0});
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("layer 0") != std::string::npos);
  }
}

TEST_CASE("mlp_forward is deterministic and shape-stable") {
  Rng rng(3);
  MlpParams p = random_net(rng, 3, 16);
  std::vector<double> x(p.in_dim(), 0.25);
  MlpTape tape;
  mlp_forward(p, x, tape);
  auto first = std::vector<double>(tape.output().begin(), tape.output().end());
  const double* storage = tape.activations.back().data();
  mlp_forward(p, x, tape);
  CHECK(std::equal(first.begin(), first.end(), tape.output().begin()));
  CHECK(storage == tape.activations.back().data());
}

TEST_CASE("mlp_backward: zero upstream gives zero gradients") {
  Rng rng(5);
  MlpParams p = random_net(rng, 3, 8);
  std::vector<double> x(p.in_dim(), 0.3);
  auto g = mlp_backward(p, x, std::vector<double>(p.out_dim(), 0.0));
  for (double v : g.param_grads.values()) CHECK(v == 0.0);
  for (double v : g.input_grad) CHECK(v == 0.0);
}

TEST_CASE("mlp_backward: single linear layer gives the outer product") {
  MlpParams p({{3, 2, Activation::Identity}});
  Rng rng(2);
  for (double& v : p.values()) v = rng.uniform(-1, 1);
  std::vector<double> x{0.5, -1.0, 2.0};
  std::vector<double> u{3.0, -0.25};
  auto g = mlp_backward(p, x, u);
  for (std::size_t o = 0; o < 2; ++o) {
    for (std::size_t i = 0; i < 3; ++i) CHECK(g.param_grads.weights(0)[o * 3 + i] == u[o] * x[i]);
    CHECK(g.param_grads.bias(0)[o] == u[o]);
  }
}

TEST_CASE("mlp_backward matches central finite differences on random nets") {
  Rng rng(17);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    MlpParams p = random_net(rng, 3, 16);
    std::vector<double> x(p.in_dim());
    for (double& v : x) v = rng.uniform(-1, 1);
    std::vector<double> u(p.out_dim());
    for (double& v : u) v = rng.uniform(-1, 1);
    auto g = mlp_backward(p, x, u);
    for (std::size_t j = 0; j < p.size(); ++j) {
      MlpParams plus = p, minus = p;
      plus.values()[j] += h;
      minus.values()[j] -= h;
      double fd = (dot(mlp_forward(plus, x), u) - dot(mlp_forward(minus, x), u)) / (2 * h);
      double an = g.param_grads.values()[j];
      if (std::abs(fd) + std::abs(an) > 1e-7) CHECK(rel_err(an, fd) < 1e-4);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (dot(mlp_forward(p, xp), u) - dot(mlp_forward(p, xm), u)) / (2 * h);
      if (std::abs(fd) + std::abs(g.input_grad[i]) > 1e-7) CHECK(rel_err(g.input_grad[i], fd) < 1e-4);
    }
  }
}

TEST_CASE("mlp serialization round-trips bit-exactly") {
  Rng rng(8);
  MlpParams p = random_net(rng, 3, 16);
  ByteWriter w;
  write_mlp(w, p);
  ByteReader r(w.bytes());
  CHECK(read_mlp(r) == p);
  CHECK(r.remaining() == 0);
  ByteReader truncated(std::string_view(w.bytes()).substr(0, w.bytes().size() - 3));
  CHECK_THROWS_AS(read_mlp(truncated), LoadError);
}

TEST_CASE("adam_step: zero gradient on fresh state leaves parameters unchanged") {
  std::vector<double> params{1.0, -2.0, 3.0};
  const auto before = params;
  std::vector<double> grads(3, 0.0);
  AdamState s = AdamState::zeros(3);
  adam_step(params, grads, s, {.lr = 0.1});
  CHECK(params == before);
  CHECK(s.step == 1);
}

TEST_CASE("adam_step: nonzero gradient always moves the parameter") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> params{rng.uniform(-1, 1)};
    std::vector<double> grads{rng.uniform(-1, 1)};
    const double before = params[0];
    AdamState s = AdamState::zeros(1);
    adam_step(params, grads, s, {.lr = 1e-3});
    CHECK(params[0] != before);
  }
}

TEST_CASE("adam_step: first step magnitude is lr * sign(g)") {
  std::vector<double> params{0.0};
  std::vector<double> grads{0.5};
  AdamState s = AdamState::zeros(1);
  adam_step(params, grads, s, {.lr = 0.1, .beta1 = 0.9, .beta2 = 0.999, .eps = 1e-8});
  // m_hat = 0.5, v_hat = 0.25 after bias correction.
  CHECK(params[0] == doctest::Approx(-0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-14));
  CHECK(params[0] == doctest::Approx(-0.1).epsilon(1e-7));
}

TEST_CASE("adam_step: two steps follow the scalar recurrence") {
  const double lr = 0.05, b1 = 0.8, b2 = 0.99, eps = 1e-6, g1 = 0.3, g2 = -1.2;
  // Hand-unrolled recurrence.
  double m1 = (1 - b1) * g1, v1 = (1 - b2) * g1 * g1;
  double x1 = 2.0 - lr * (m1 / (1 - b1)) / (std::sqrt(v1 / (1 - b2)) + eps);
  double m2 = b1 * m1 + (1 - b1) * g2, v2 = b2 * v1 + (1 - b2) * g2 * g2;
  double x2 = x1 - lr * (m2 / (1 - b1 * b1)) / (std::sqrt(v2 / (1 - b2 * b2)) + eps);

  std::vector<double> params{2.0};
  AdamState s = AdamState::zeros(1);
  AdamConfig cfg{lr, b1, b2, eps};
  adam_step(params, std::vector<double>{g1}, s, cfg);
  CHECK(params[0] == doctest::Approx(x1).epsilon(1e-14));
  adam_step(params, std::vector<double>{g2}, s, cfg);
  CHECK(params[0] == doctest::Approx(x2).epsilon(1e-14));
  CHECK(s.step == 2);
  for (double v : s.v) CHECK(v >= 0.0);
}

TEST_CASE("adam_step: non-finite gradient reports its index and leaves state intact") {
  std::vector<double> params{1.0, 2.0, 3.0};
  std::vector<double> grads{0.1, NAN, 0.2};
  AdamState s = AdamState::zeros(3);
  try {
    adam_step(params, grads, s, {});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
  CHECK(s.step == 0);
  CHECK(params == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("gaussian_log_prob: analytic one-dimensional cases") {
  std::vector<double> mean{0.7}, log_std{0.0};
  GaussianHead head{mean, log_std};
  const double half_log_2pi = 0.5 * std::log(2 * std::numbers::pi);
  CHECK(gaussian_log_prob(head, std::vector<double>{0.7}) == doctest::Approx(-half_log_2pi).epsilon(1e-15));
  CHECK(gaussian_log_prob(head, std::vector<double>{1.7}) == doctest::Approx(-half_log_2pi - 0.5).epsilon(1e-15));
  CHECK(-half_log_2pi == doctest::Approx(-0.9189).epsilon(1e-4));
}

TEST_CASE("gaussian_log_prob integrates to one on a grid") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> mean{rng.uniform(-1, 1)}, log_std{rng.uniform(-1, 0.5)};
    GaussianHead head{mean, log_std};
    const double sigma = std::exp(log_std[0]);
    const double lo = mean[0] - 12 * sigma, hi = mean[0] + 12 * sigma;
    const int n = 20000;
    const double dx = (hi - lo) / n;
    double total = 0;
    for (int i = 0; i <= n; ++i) {
      double w = (i == 0 || i == n) ? 0.5 : 1.0;
      total += w * std::exp(gaussian_log_prob(head, std::vector<double>{lo + i * dx}));
    }
    CHECK(std::abs(total * dx - 1.0) < 1e-3);
  }
  // Two dimensions, coarser grid.
  std::vector<double> mean{0.2, -0.4}, log_std{-0.3, 0.1};
  GaussianHead head{mean, log_std};
  const int n = 400;
  double total = 0;
  const double lo0 = mean[0] - 9 * std::exp(log_std[0]), d0 = 18 * std::exp(log_std[0]) / n;
  const double lo1 = mean[1] - 9 * std::exp(log_std[1]), d1 = 18 * std::exp(log_std[1]) / n;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      total += std::exp(gaussian_log_prob(head, std::vector<double>{lo0 + i * d0, lo1 + j * d1}));
  CHECK(std::abs(total * d0 * d1 - 1.0) < 1e-3);
}

TEST_CASE("gaussian_log_prob is maximized at the mean (grid search)") {
  std::vector<double> mean{0.3, -0.6}, log_std{-0.5, 0.2};
  GaussianHead head{mean, log_std};
  double best = -1e300;
  std::vector<double> arg;
  for (int i = -50; i <= 50; ++i)
    for (int j = -50; j <= 50; ++j) {
      std::vector<double> a{0.3 + 0.02 * i, -0.6 + 0.02 * j};
      double lp = gaussian_log_prob(head, a);
      if (lp > best) best = lp, arg = a;
    }
  CHECK(arg[0] == doctest::Approx(0.3));
  CHECK(arg[1] == doctest::Approx(-0.6));
}

TEST_CASE("gaussian_log_prob_grad matches finite differences") {
  Rng rng(31);
  std::vector<double> mean{0.1, -0.3, 0.8}, log_std{-0.2, 0.4, -1.0}, action{0.5, 0.2, 0.1};
  std::vector<double> dm(3), dl(3);
  gaussian_log_prob_grad({mean, log_std}, action, dm, dl);
  const double h = 1e-6;
  for (std::size_t i = 0; i < 3; ++i) {
    auto mp = mean, mm = mean, lp = log_std, lm = log_std;
    mp[i] += h, mm[i] -= h, lp[i] += h, lm[i] -= h;
    double fdm = (gaussian_log_prob({mp, log_std}, action) - gaussian_log_prob({mm, log_std}, action)) / (2 * h);
    double fdl = (gaussian_log_prob({mean, lp}, action) - gaussian_log_prob({mean, lm}, action)) / (2 * h);
    CHECK(dm[i] == doctest::Approx(fdm).epsilon(1e-6));
    CHECK(dl[i] == doctest::Approx(fdl).epsilon(1e-6));
  }
}

TEST_CASE("gaussian_sample: degenerate variance, determinism, law of large numbers") {
  std::vector<double> mean{1.5, -2.0};
  std::vector<double> tiny{-20.0, -20.0};
  Rng rng(1);
  auto s = gaussian_sample({mean, tiny}, rng);
  CHECK(std::abs(s[0] - 1.5) < 1e-8);
  CHECK(std::abs(s[1] + 2.0) < 1e-8);

  std::vector<double> log_std{0.3, -0.2};
  Rng a(99), b(99);
  CHECK(gaussian_sample({mean, log_std}, a) == gaussian_sample({mean, log_std}, b));

  Rng big(123);
  const int n = 100000;
  double sum0 = 0, sum1 = 0;
  for (int i = 0; i < n; ++i) {
    auto x = gaussian_sample({mean, log_std}, big);
    sum0 += x[0];
    sum1 += x[1];
  }
  CHECK(std::abs(sum0 / n - mean[0]) < 4 * std::exp(log_std[0]) / std::sqrt(n));
  CHECK(std::abs(sum1 / n - mean[1]) < 4 * std::exp(log_std[1]) / std::sqrt(n));
}

TEST_CASE("log_std is clamped to [-20, 2]") {
  CHECK(clamp_log_std(5.0) == 2.0);
  CHECK(clamp_log_std(-30.0) == -20.0);
  std::vector<double> mean{0.0}, huge{50.0}, capped{2.0};
  CHECK(gaussian_log_prob({mean, huge}, std::vector<double>{1.0}) ==
        gaussian_log_prob({mean, capped}, std::vector<double>{1.0}));
}

TEST_CASE("rng: state round-trip and shuffle determinism") {
  Rng a(42);
  a.normal();
  Rng b;
  b.set_state(a.state());
  CHECK(a == b);
  CHECK(a.uniform() == b.uniform());
  std::vector<int> x{0, 1, 2, 3, 4, 5, 6, 7}, y = x;
  Rng r1(5), r2(5);
  r1.shuffle(std::span<int>(x));
  r2.shuffle(std::span<int>(y));
  CHECK(x == y);
  CHECK_THROWS_AS(b.set_state("garbage"), LoadError);
}
