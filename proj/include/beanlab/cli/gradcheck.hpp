#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "beanlab/network/mlp.hpp"
#include "beanlab/network/objective.hpp"

namespace beanlab::cli {

struct GradcheckOptions {
  double step = 1e-5;        ///< central-difference step
  double tolerance = 1e-4;   ///< max relative error allowed
  double skip_below = 1e-8;  ///< entries with |analytic| + |numeric| below this are skipped
  std::uint64_t seed = 20200214;
  double alpha = 0.5;
  /// Mutation check: reverse the sign of the BEAN contribution to the analytic gradient.
  bool inject_sign_flip = false;
};

struct GradcheckCase {
  std::string name;
  net::BeanPlan plan;
  net::BaselineReg baseline;
};

struct GradcheckResult {
  std::string name;
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;  ///< flat parameter index (layer-major, weights then biases)
  std::size_t checked = 0;
  bool pass = true;
};

/// Number of weights and biases, and flat read/write access in gradcheck order.
std::size_t parameter_count(const net::Mlp& model);
double& parameter_at(net::Mlp& model, std::size_t flat);
double gradient_at(const net::Gradients& g, std::size_t flat);

/// Compare total_loss gradients against central differences for one case on
/// the given model and batch. Dropout cases replay the same mask for every
/// evaluation.
GradcheckResult check_case(const net::Mlp& model, const Matrix& x, std::span<const std::uint8_t> labels,
                           const GradcheckCase& c, const GradcheckOptions& opts);

/// The standard suite: 6-8-5-4 network, 3 samples, weights kept at least 1e-3
/// away from zero; BEAN-1/BEAN-2 x square/abs at alpha, plain cross entropy,
/// L1, L2 and dropout.
std::vector<GradcheckResult> run_gradcheck(const GradcheckOptions& opts);

}  // namespace beanlab::cli
