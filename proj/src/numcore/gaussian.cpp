#include "arena/numcore/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arena/core/error.hpp"

namespace arena::numcore {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

void check(const GaussianHead& head, std::size_t action_size) {
  if (head.mean.empty()) throw ShapeError("gaussian head needs action_dim >= 1");
  if (head.log_std.size() != head.mean.size() || action_size != head.mean.size()) {
    throw ShapeError("gaussian head/action dimension mismatch");
  }
}

}  // namespace

double clamp_log_std(double log_std) { return std::clamp(log_std, kLogStdMin, kLogStdMax); }

double gaussian_log_prob(const GaussianHead& head, std::span<const double> action) {
  check(head, action.size());
  double total = 0.0;
  for (std::size_t i = 0; i < action.size(); ++i) {
    const double ls = clamp_log_std(head.log_std[i]);
    const double z = (action[i] - head.mean[i]) * std::exp(-ls);
    total += -0.5 * z * z - ls - kHalfLog2Pi;
  }
  return total;
}

void gaussian_log_prob_grad(const GaussianHead& head, std::span<const double> action,
                            std::span<double> d_mean, std::span<double> d_log_std) {
  check(head, action.size());
  if (d_mean.size() != action.size() || d_log_std.size() != action.size()) {
    throw ShapeError("gaussian gradient buffer mismatch");
  }
  for (std::size_t i = 0; i < action.size(); ++i) {
    const double ls = clamp_log_std(head.log_std[i]);
    const double inv_std = std::exp(-ls);
    const double z = (action[i] - head.mean[i]) * inv_std;
    d_mean[i] = z * inv_std;
    const bool clamped = head.log_std[i] < kLogStdMin || head.log_std[i] > kLogStdMax;
    d_log_std[i] = clamped ? 0.0 : z * z - 1.0;
  }
}

void gaussian_sample(const GaussianHead& head, Rng& rng, std::span<double> out) {
  check(head, out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = head.mean[i] + std::exp(clamp_log_std(head.log_std[i])) * rng.normal();
  }
}

std::vector<double> gaussian_sample(const GaussianHead& head, Rng& rng) {
  std::vector<double> out(head.mean.size());
  gaussian_sample(head, rng, out);
  return out;
}

double gaussian_entropy(std::span<const double> log_std) {
  double total = 0.0;
  for (double ls : log_std) total += clamp_log_std(ls) + 0.5 + kHalfLog2Pi;
  return total;
}

}  // namespace arena::numcore
