#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "beanlab/linalg/matrix.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab::net {

struct DenseLayer {
  Matrix weights;               ///< fan_in x fan_out
  std::vector<double> biases;   ///< fan_out

  std::size_t fan_in() const noexcept { return weights.rows(); }
  std::size_t fan_out() const noexcept { return weights.cols(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Dense layers with rectifier activations between them and linear logits at the end.
struct Mlp {
  std::vector<DenseLayer> layers;

  /// Layer sizes {input, hidden..., classes}. Weights ~ normal(0, 2/fan_in), zero biases.
  static Mlp create(std::span<const std::size_t> dims, SeededRng& rng);
  static Mlp create(std::initializer_list<std::size_t> dims, SeededRng& rng);

  std::size_t input_dim() const { return layers.front().fan_in(); }
  std::size_t output_dim() const { return layers.back().fan_out(); }
  std::vector<std::size_t> dims() const;

  /// Throws ShapeError when layer sizes do not chain, ConfigError when empty.
  void validate() const;

  friend bool operator==(const Mlp&, const Mlp&) = default;
};

/// Zeroes selected post-rectifier activations of one hidden layer at evaluation time.
struct ActivationMask {
  std::size_t layer = 0;
  std::vector<std::uint8_t> keep;  ///< 1 = pass through, 0 = force to zero
};

struct ForwardOptions {
  std::span<const ActivationMask> masks;
  double dropout = 0.0;          ///< drop probability on hidden activations (training only)
  SeededRng* rng = nullptr;      ///< required when dropout > 0
};

/// Per-layer record of one minibatch. For hidden layers activations[l] is the
/// rectified pre-activation; the matrix fed to layer l+1 additionally carries
/// multipliers[l] (dropout / ablation) when that is non-empty.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> pre_activations;
  std::vector<Matrix> activations;
  std::vector<Matrix> multipliers;

  const Matrix& logits() const { return activations.back(); }
  /// The input actually consumed by dense layer l.
  Matrix layer_input(std::size_t l) const;
};

ForwardTrace forward(const Mlp& model, const Matrix& x, const ForwardOptions& opts = {});

/// Logits only, evaluated in chunks; no trace is kept.
Matrix predict_logits(const Mlp& model, const Matrix& x, std::span<const ActivationMask> masks = {});

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  static Gradients zeros_like(const Mlp& model);
  void add(const Gradients& other, double scale = 1.0);
};

/// Extra dL/dH for the rectified activations of a hidden layer.
struct ActivationInjection {
  std::size_t layer = 0;
  Matrix grad;
};

/// Gradient of the scalar loss with respect to every weight and bias, given
/// dL/dlogits and optional activation-gradient injections. The rectifier
/// derivative at exactly 0 is taken as 0.
Gradients backward(const Mlp& model, const ForwardTrace& trace, const Matrix& dlogits,
                   std::span<const ActivationInjection> injections = {});

}  // namespace beanlab::net
