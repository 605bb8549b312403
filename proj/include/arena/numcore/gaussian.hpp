#pragma once

#include <span>
#include <vector>

#include "arena/core/rng.hpp"

namespace arena::numcore {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

/// Diagonal Gaussian over actions: mean from the policy network and a
/// state-independent log standard deviation. Non-owning view.
struct GaussianHead {
  std::span<const double> mean;
  std::span<const double> log_std;
};

double clamp_log_std(double log_std);

double gaussian_log_prob(const GaussianHead& head, std::span<const double> action);

/// Partial derivatives of gaussian_log_prob w.r.t. mean and log_std,
/// written (not accumulated) into the output spans.
void gaussian_log_prob_grad(const GaussianHead& head, std::span<const double> action,
                            std::span<double> d_mean, std::span<double> d_log_std);

/// mean + exp(log_std) * z with z drawn from rng.
std::vector<double> gaussian_sample(const GaussianHead& head, Rng& rng);
void gaussian_sample(const GaussianHead& head, Rng& rng, std::span<double> out);

/// Differential entropy; its derivative w.r.t. each log_std entry is 1.
double gaussian_entropy(std::span<const double> log_std);

}  // namespace arena::numcore
