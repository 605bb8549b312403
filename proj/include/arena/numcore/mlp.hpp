#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "arena/core/binary_io.hpp"
#include "arena/core/rng.hpp"

namespace arena::numcore {

enum class Activation : std::uint8_t { Identity = 0, Tanh = 1 };

struct LayerShape {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::Tanh;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

/// Parameters of a dense feed-forward network stored in one flat buffer.
///
/// Layer k owns a row-major weight block [out x in] followed by its bias
/// [out]. Gradients and Adam moments use the same type ("MlpParams-shaped"),
/// so they can be treated as flat vectors for norms and optimizer updates.
class MlpParams {
 public:
  MlpParams() = default;
  /// Zero-initialized network. Throws ShapeError if dimensions do not chain.
  explicit MlpParams(std::vector<LayerShape> layers);

  static MlpParams zeros_like(const MlpParams& other) { return MlpParams(other.layers_); }

  std::span<const LayerShape> layers() const { return layers_; }
  std::size_t layer_count() const { return layers_.size(); }
  std::size_t in_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  std::size_t out_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
  std::size_t size() const { return values_.size(); }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const MlpParams& other) const { return layers_ == other.layers_; }

  friend bool operator==(const MlpParams&, const MlpParams&) = default;

 private:
  std::vector<LayerShape> layers_;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

/// Builds in -> hidden... -> out with tanh hidden layers and a linear output.
/// Weights are uniform in +-gain*sqrt(3/fan_in); biases are zero.
MlpParams make_mlp(std::size_t in, std::span<const std::size_t> hidden, std::size_t out,
                   double hidden_gain, double output_gain, Rng& rng);

/// Post-activation outputs of every layer for one input; tape[0] is the input.
struct MlpTape {
  std::vector<std::vector<double>> activations;

  std::span<const double> output() const { return activations.back(); }
};

std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> input);

/// Forward pass that keeps the activations needed by mlp_backward_accumulate.
/// Reuses the tape's storage when dimensions are unchanged.
void mlp_forward(const MlpParams& params, std::span<const double> input, MlpTape& tape);

struct MlpGradients {
  MlpParams param_grads;
  std::vector<double> input_grad;
};

/// Gradient of upstream . mlp_forward(params, input) w.r.t. every parameter
/// and the input.
MlpGradients mlp_backward(const MlpParams& params, std::span<const double> input,
                          std::span<const double> upstream);

/// Reverse pass over a recorded tape; adds into param_grads (flat, same
/// layout as params.values()). input_grad may be empty when not needed.
void mlp_backward_accumulate(const MlpParams& params, const MlpTape& tape,
                             std::span<const double> upstream, std::span<double> param_grads,
                             std::span<double> input_grad = {});

/// Dimension header (layer count, per-layer in/out/activation) followed by
/// the raw little-endian parameter values.
void write_mlp(ByteWriter& out, const MlpParams& params);
MlpParams read_mlp(ByteReader& in);

}  // namespace arena::numcore
