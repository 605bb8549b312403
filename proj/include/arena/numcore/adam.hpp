#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arena/core/binary_io.hpp"
#include "arena/numcore/mlp.hpp"

namespace arena::numcore {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment accumulators mirroring a flat parameter vector.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  static AdamState zeros(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n), 0}; }

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// Bias-corrected Adam update applied in place. Validates every gradient
/// entry before touching the parameters; a non-finite entry raises
/// NumericError naming its flat index.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg);

inline void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
                      const AdamConfig& cfg) {
  adam_step(params.values(), grads.values(), state, cfg);
}

void write_adam(ByteWriter& out, const AdamState& state);
AdamState read_adam(ByteReader& in);

}  // namespace arena::numcore
