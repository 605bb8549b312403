#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace arena::harl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// Generalized advantage estimation over a [T x N] block stored time-major
/// (index t * N + n). dones[t*N+n] = 1 cuts bootstrapping after step t;
/// bootstrap[n] values the state following the last step.
/// returns = advantages + values.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const double> dones, std::span<const double> bootstrap, std::size_t horizon,
                      double discount, double lambda);

}  // namespace arena::harl
