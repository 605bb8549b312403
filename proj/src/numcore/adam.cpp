#include "arena/numcore/adam.hpp"

#include <cmath>
#include <string>

#include "arena/core/error.hpp"

namespace arena::numcore {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ShapeError("adam state/gradient shape does not match parameters");
  }
  if (!(cfg.lr > 0.0)) throw ContractError("adam learning rate must be positive");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("non-finite gradient at parameter index " + std::to_string(i));
    }
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

void write_adam(ByteWriter& out, const AdamState& state) {
  out.u64(state.step);
  out.f64s(state.m);
  out.f64s(state.v);
}

AdamState read_adam(ByteReader& in) {
  AdamState s;
  s.step = in.u64();
  s.m = in.f64s();
  s.v = in.f64s();
  if (s.m.size() != s.v.size()) throw LoadError("adam moment sizes differ");
  return s;
}

}  // namespace arena::numcore
