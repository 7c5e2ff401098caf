#include "beanlab/network/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/kernels.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::net {
namespace {

void add_bias(Matrix& z, const std::vector<double>& b) {
  for (std::size_t s = 0; s < z.rows(); ++s) {
    auto r = z.row(s);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += b[j];
  }
}

void rectify(Matrix& z) {
  for (double& v : z.values()) v = v > 0.0 ? v : 0.0;
}

/// Combined multiplier for hidden layer l, empty when it would be all ones.
Matrix hidden_multiplier(std::size_t l, std::size_t rows, std::size_t cols,
                         const ForwardOptions& opts) {
  Matrix mult;
  for (const auto& mask : opts.masks) {
    if (mask.layer != l) continue;
    if (mask.keep.size() != cols) {
      throw ShapeError("activation mask for layer " + std::to_string(l) + " has " +
                       std::to_string(mask.keep.size()) + " entries, layer has " +
                       std::to_string(cols));
    }
    if (mult.empty()) mult = Matrix(rows, cols, 1.0);
    for (std::size_t s = 0; s < rows; ++s) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (!mask.keep[j]) mult(s, j) = 0.0;
      }
    }
  }
  if (opts.dropout > 0.0) {
    if (!(opts.dropout < 1.0)) throw ConfigError("dropout probability must lie in [0, 1)");
    if (opts.rng == nullptr) throw ConfigError("dropout requires a random stream");
    if (mult.empty()) mult = Matrix(rows, cols, 1.0);
    const double keep_scale = 1.0 / (1.0 - opts.dropout);
    for (double& v : mult.values()) v *= opts.rng->bernoulli(opts.dropout) ? 0.0 : keep_scale;
  }
  return mult;
}

}  // namespace

Mlp Mlp::create(std::span<const std::size_t> dims, SeededRng& rng) {
  if (dims.size() < 2) throw ConfigError("an MLP needs at least an input and an output size");
  Mlp m;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] == 0 || dims[l + 1] == 0) throw ConfigError("layer sizes must be positive");
    const double stddev = std::sqrt(2.0 / static_cast<double>(dims[l]));
    m.layers.push_back({gaussian_fill(rng, dims[l], dims[l + 1], stddev),
                        std::vector<double>(dims[l + 1], 0.0)});
  }
  return m;
}

Mlp Mlp::create(std::initializer_list<std::size_t> dims, SeededRng& rng) {
  return create(std::span<const std::size_t>(dims.begin(), dims.size()), rng);
}

std::vector<std::size_t> Mlp::dims() const {
  std::vector<std::size_t> d;
  if (layers.empty()) return d;
  d.push_back(layers.front().fan_in());
  for (const auto& layer : layers) d.push_back(layer.fan_out());
  return d;
}

void Mlp::validate() const {
  if (layers.empty()) throw ConfigError("model has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].biases.size() != layers[l].fan_out()) {
      throw ShapeError("layer " + std::to_string(l) + " has " +
                       std::to_string(layers[l].biases.size()) + " biases for " +
                       std::to_string(layers[l].fan_out()) + " outputs");
    }
    if (l > 0 && layers[l - 1].fan_out() != layers[l].fan_in()) {
      throw ShapeError("layer " + std::to_string(l - 1) + " outputs " +
                       std::to_string(layers[l - 1].fan_out()) + " but layer " + std::to_string(l) +
                       " expects " + std::to_string(layers[l].fan_in()));
    }
  }
}

Matrix ForwardTrace::layer_input(std::size_t l) const {
  if (l == 0) return input;
  if (multipliers[l - 1].empty()) return activations[l - 1];
  return hadamard(activations[l - 1], multipliers[l - 1]);
}

ForwardTrace forward(const Mlp& model, const Matrix& x, const ForwardOptions& opts) {
  model.validate();
  if (x.cols() != model.input_dim()) {
    throw ShapeError("forward: input " + x.shape_string() + " does not match model input width " +
                     std::to_string(model.input_dim()));
  }
  const std::size_t depth = model.layers.size();
  for (const auto& mask : opts.masks) {
    if (mask.layer + 1 >= depth) {
      throw InputError("activation mask targets layer " + std::to_string(mask.layer) +
                       ", which is not a hidden layer");
    }
  }
  ForwardTrace t;
  t.input = x;
  t.pre_activations.reserve(depth);
  t.activations.reserve(depth);
  t.multipliers.resize(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    Matrix z = matmul(l == 0 ? x : t.layer_input(l), model.layers[l].weights);
    add_bias(z, model.layers[l].biases);
    t.pre_activations.push_back(z);
    if (l + 1 < depth) {
      rectify(z);
      t.multipliers[l] = hidden_multiplier(l, z.rows(), z.cols(), opts);
    }
    t.activations.push_back(std::move(z));
  }
  return t;
}

Matrix predict_logits(const Mlp& model, const Matrix& x, std::span<const ActivationMask> masks) {
  constexpr std::size_t kChunk = 1000;
  Matrix out(x.rows(), model.output_dim());
  ForwardOptions opts;
  opts.masks = masks;
  for (std::size_t start = 0; start < x.rows(); start += kChunk) {
    const std::size_t n = std::min(kChunk, x.rows() - start);
    Matrix chunk(n, x.cols(),
                 std::vector<double>(x.values().begin() + static_cast<std::ptrdiff_t>(start * x.cols()),
                                     x.values().begin() + static_cast<std::ptrdiff_t>((start + n) * x.cols())));
    const ForwardTrace t = forward(model, chunk, opts);
    std::copy(t.logits().values().begin(), t.logits().values().end(),
              out.values().begin() + static_cast<std::ptrdiff_t>(start * out.cols()));
  }
  return out;
}

Gradients Gradients::zeros_like(const Mlp& model) {
  Gradients g;
  for (const auto& layer : model.layers) {
    g.weights.emplace_back(layer.fan_in(), layer.fan_out());
    g.biases.emplace_back(layer.fan_out(), 0.0);
  }
  return g;
}

void Gradients::add(const Gradients& other, double scale) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    add_inplace(weights[l], other.weights[l], scale);
    for (std::size_t j = 0; j < biases[l].size(); ++j) biases[l][j] += scale * other.biases[l][j];
  }
}

Gradients backward(const Mlp& model, const ForwardTrace& trace, const Matrix& dlogits,
                   std::span<const ActivationInjection> injections) {
  const std::size_t depth = model.layers.size();
  if (trace.activations.size() != depth) throw ShapeError("backward: trace depth does not match model");
  if (dlogits.rows() != trace.logits().rows() || dlogits.cols() != trace.logits().cols()) {
    throw ShapeError("backward: dlogits " + dlogits.shape_string() + " vs logits " +
                     trace.logits().shape_string());
  }
  for (const auto& inj : injections) {
    if (inj.layer + 1 >= depth) {
      throw ShapeError("backward: injection targets non-hidden layer " + std::to_string(inj.layer));
    }
    const Matrix& act = trace.activations[inj.layer];
    if (inj.grad.rows() != act.rows() || inj.grad.cols() != act.cols()) {
      throw ShapeError("backward: injection for layer " + std::to_string(inj.layer) + " is " +
                       inj.grad.shape_string() + ", activations are " + act.shape_string());
    }
  }

  Gradients g = Gradients::zeros_like(model);
  Matrix dz = dlogits;
  for (std::size_t l = depth; l-- > 0;) {
    g.weights[l] = matmul_tn(trace.layer_input(l), dz);
    auto& gb = g.biases[l];
    for (std::size_t s = 0; s < dz.rows(); ++s) {
      auto r = dz.row(s);
      for (std::size_t j = 0; j < r.size(); ++j) gb[j] += r[j];
    }
    if (l == 0) break;
    // dL/d(input of layer l), then back through multiplier and rectifier of layer l-1.
    Matrix da = matmul_nt(dz, model.layers[l].weights);
    if (!trace.multipliers[l - 1].empty()) da = hadamard(da, trace.multipliers[l - 1]);
    for (const auto& inj : injections) {
      if (inj.layer == l - 1) add_inplace(da, inj.grad);
    }
    const Matrix& pre = trace.pre_activations[l - 1];
    auto dv = da.values();
    auto pv = pre.values();
    for (std::size_t i = 0; i < dv.size(); ++i) {
      if (!(pv[i] > 0.0)) dv[i] = 0.0;
    }
    dz = std::move(da);
  }
  return g;
}

}  // namespace beanlab::net
