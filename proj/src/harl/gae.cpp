#include "arena/harl/gae.hpp"

#include "arena/core/error.hpp"

namespace arena::harl {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const double> dones, std::span<const double> bootstrap, std::size_t horizon,
                      double discount, double lambda) {
  const std::size_t n = bootstrap.size();
  if (rewards.size() != horizon * n || values.size() != rewards.size() || dones.size() != rewards.size()) {
    throw ShapeError("rewards, values and dones must all hold horizon x instances entries");
  }
  GaeResult out{std::vector<double>(rewards.size()), std::vector<double>(rewards.size())};
  for (std::size_t e = 0; e < n; ++e) {
    double next_value = bootstrap[e];
    double next_adv = 0.0;
    for (std::size_t t = horizon; t-- > 0;) {
      const std::size_t i = t * n + e;
      const double live = 1.0 - dones[i];
      const double delta = rewards[i] + discount * next_value * live - values[i];
      next_adv = delta + discount * lambda * live * next_adv;
      out.advantages[i] = next_adv;
      out.returns[i] = next_adv + values[i];
      next_value = values[i];
    }
  }
  return out;
}

}  // namespace arena::harl
