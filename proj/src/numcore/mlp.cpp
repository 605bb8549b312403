#include "arena/numcore/mlp.hpp"

#include <cmath>
#include <string>

#include "arena/core/error.hpp"

namespace arena::numcore {

MlpParams::MlpParams(std::vector<LayerShape> layers) : layers_(std::move(layers)) {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& l = layers_[k];
    if (l.in == 0 || l.out == 0) {
      throw ShapeError("layer " + std::to_string(k) + " has a zero dimension");
    }
    if (k > 0 && layers_[k - 1].out != l.in) {
      throw ShapeError("layer " + std::to_string(k) + " expects " + std::to_string(l.in) +
                       " inputs but layer " + std::to_string(k - 1) + " produces " +
                       std::to_string(layers_[k - 1].out));
    }
    offsets_.push_back(offset);
    offset += l.out * l.in + l.out;
  }
  values_.assign(offset, 0.0);
}

std::span<double> MlpParams::weights(std::size_t layer) {
  return {values_.data() + offsets_[layer], layers_[layer].out * layers_[layer].in};
}

std::span<const double> MlpParams::weights(std::size_t layer) const {
  return {values_.data() + offsets_[layer], layers_[layer].out * layers_[layer].in};
}

std::span<double> MlpParams::bias(std::size_t layer) {
  const auto& l = layers_[layer];
  return {values_.data() + offsets_[layer] + l.out * l.in, l.out};
}

std::span<const double> MlpParams::bias(std::size_t layer) const {
  const auto& l = layers_[layer];
  return {values_.data() + offsets_[layer] + l.out * l.in, l.out};
}

MlpParams make_mlp(std::size_t in, std::span<const std::size_t> hidden, std::size_t out,
                   double hidden_gain, double output_gain, Rng& rng) {
  std::vector<LayerShape> shapes;
  std::size_t prev = in;
  for (std::size_t h : hidden) {
    shapes.push_back({prev, h, Activation::Tanh});
    prev = h;
  }
  shapes.push_back({prev, out, Activation::Identity});
  MlpParams params(std::move(shapes));
  for (std::size_t k = 0; k < params.layer_count(); ++k) {
    const double gain = (k + 1 == params.layer_count()) ? output_gain : hidden_gain;
    const double bound = gain * std::sqrt(3.0 / static_cast<double>(params.layers()[k].in));
    for (double& w : params.weights(k)) w = rng.uniform(-bound, bound);
  }
  return params;
}

namespace {

void check_input(const MlpParams& params, std::span<const double> input) {
  if (params.layer_count() == 0) throw ShapeError("network has no layers");
  if (input.size() != params.in_dim()) {
    throw ShapeError("layer 0 expects " + std::to_string(params.in_dim()) + " inputs, got " +
                     std::to_string(input.size()));
  }
}

}  // namespace

void mlp_forward(const MlpParams& params, std::span<const double> input, MlpTape& tape) {
  check_input(params, input);
  const std::size_t n_layers = params.layer_count();
  tape.activations.resize(n_layers + 1);
  tape.activations[0].assign(input.begin(), input.end());
  for (std::size_t k = 0; k < n_layers; ++k) {
    const auto& shape = params.layers()[k];
    const auto w = params.weights(k);
    const auto b = params.bias(k);
    const auto& x = tape.activations[k];
    auto& y = tape.activations[k + 1];
    y.resize(shape.out);
    for (std::size_t o = 0; o < shape.out; ++o) {
      const double* row = w.data() + o * shape.in;
      double acc = b[o];
      for (std::size_t i = 0; i < shape.in; ++i) acc += row[i] * x[i];
      y[o] = shape.activation == Activation::Tanh ? std::tanh(acc) : acc;
    }
  }
}

std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> input) {
  for (double v : input) {
    if (!std::isfinite(v)) throw NumericError("non-finite network input");
  }
  MlpTape tape;
  mlp_forward(params, input, tape);
  return std::move(tape.activations.back());
}

void mlp_backward_accumulate(const MlpParams& params, const MlpTape& tape,
                             std::span<const double> upstream, std::span<double> param_grads,
                             std::span<double> input_grad) {
  const std::size_t n_layers = params.layer_count();
  if (tape.activations.size() != n_layers + 1) throw ShapeError("tape does not match network");
  if (upstream.size() != params.out_dim()) {
    throw ShapeError("layer " + std::to_string(n_layers - 1) + " produces " +
                     std::to_string(params.out_dim()) + " outputs, upstream has " +
                     std::to_string(upstream.size()));
  }
  if (param_grads.size() != params.size()) throw ShapeError("gradient buffer size mismatch");
  if (!input_grad.empty() && input_grad.size() != params.in_dim()) {
    throw ShapeError("input gradient size mismatch");
  }

  // delta holds dL/d(pre-activation) of the current layer.
  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> next_delta;
  std::size_t offset = params.size();
  for (std::size_t k = n_layers; k-- > 0;) {
    const auto& shape = params.layers()[k];
    const auto& x = tape.activations[k];
    const auto& y = tape.activations[k + 1];
    if (shape.activation == Activation::Tanh) {
      for (std::size_t o = 0; o < shape.out; ++o) delta[o] *= 1.0 - y[o] * y[o];
    }
    offset -= shape.out * shape.in + shape.out;
    double* gw = param_grads.data() + offset;
    double* gb = gw + shape.out * shape.in;
    for (std::size_t o = 0; o < shape.out; ++o) {
      const double d = delta[o];
      gb[o] += d;
      double* grow = gw + o * shape.in;
      for (std::size_t i = 0; i < shape.in; ++i) grow[i] += d * x[i];
    }
    if (k == 0 && input_grad.empty()) break;
    const auto w = params.weights(k);
    next_delta.assign(shape.in, 0.0);
    for (std::size_t o = 0; o < shape.out; ++o) {
      const double d = delta[o];
      const double* row = w.data() + o * shape.in;
      for (std::size_t i = 0; i < shape.in; ++i) next_delta[i] += d * row[i];
    }
    delta.swap(next_delta);
  }
  if (!input_grad.empty()) {
    for (std::size_t i = 0; i < input_grad.size(); ++i) input_grad[i] += delta[i];
  }
}

MlpGradients mlp_backward(const MlpParams& params, std::span<const double> input,
                          std::span<const double> upstream) {
  MlpTape tape;
  mlp_forward(params, input, tape);
  MlpGradients grads{MlpParams::zeros_like(params), std::vector<double>(params.in_dim(), 0.0)};
  mlp_backward_accumulate(params, tape, upstream, grads.param_grads.values(), grads.input_grad);
  return grads;
}

void write_mlp(ByteWriter& out, const MlpParams& params) {
  out.u32(static_cast<std::uint32_t>(params.layer_count()));
  for (const auto& l : params.layers()) {
    out.u32(static_cast<std::uint32_t>(l.in));
    out.u32(static_cast<std::uint32_t>(l.out));
    out.u8(static_cast<std::uint8_t>(l.activation));
  }
  for (double v : params.values()) out.f64(v);
}

MlpParams read_mlp(ByteReader& in) {
  std::uint32_t n = in.u32();
  if (n > 1024) throw LoadError("implausible layer count " + std::to_string(n));
  std::vector<LayerShape> shapes(n);
  for (auto& s : shapes) {
    s.in = in.u32();
    s.out = in.u32();
    std::uint8_t act = in.u8();
    if (act > 1) throw LoadError("unknown activation tag");
    s.activation = static_cast<Activation>(act);
  }
  MlpParams params;
  try {
    params = MlpParams(std::move(shapes));
  } catch (const ShapeError& e) {
    throw LoadError(std::string("bad network header: ") + e.what());
  }
  if (in.remaining() < params.size() * 8) throw LoadError("truncated data");
  for (double& v : params.values()) v = in.f64();
  return params;
}

}  // namespace arena::numcore
