#include "beanlab/analysis/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::analysis {
namespace {

constexpr double kTolerance = 1e-9;
constexpr std::size_t kMaxIterations = 1000;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> mat_vec(const Matrix& c, const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.cols(); ++j) s += c(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) {
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * b[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * b[i];
  }
}

/// Leading eigenvector of a PSD matrix, orthogonal to `basis`.
std::vector<double> power_iteration(const Matrix& c, const std::vector<std::vector<double>>& basis) {
  const std::size_t d = c.rows();
  std::vector<double> v(d);
  // Fixed, non-degenerate start so the result is deterministic.
  for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7) + 0.01 * static_cast<double>(i);
  orthogonalize(v, basis);
  double n = norm(v);
  if (n == 0.0) {
    v.assign(d, 0.0);
    return v;
  }
  for (double& x : v) x /= n;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    std::vector<double> next = mat_vec(c, v);
    orthogonalize(next, basis);
    n = norm(next);
    if (n < 1e-300) return v;  // v spans a null direction already
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      next[i] /= n;
      change = std::max(change, std::fabs(next[i] - v[i]));
    }
    v = std::move(next);
    if (change < kTolerance) break;
  }
  return v;
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
  }
  if (!v.empty() && v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

double rayleigh(const Matrix& c, const std::vector<double>& v) {
  const auto cv = mat_vec(c, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * cv[i];
  return s;
}

}  // namespace

PcaResult pca_2d(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) throw InputError("pca needs at least two rows");
  if (d == 0) throw InputError("pca needs at least one column");
  Matrix centered = x;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centered(i, j) -= mean;
  }
  Matrix cov = matmul_tn(centered, centered);
  scale_inplace(cov, 1.0 / static_cast<double>(n - 1));
  // Symmetrize exactly; matmul_tn accumulates each entry in the same order but be explicit.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) cov(j, i) = cov(i, j);
  }
  PcaResult out;
  for (std::size_t i = 0; i < d; ++i) out.total_variance += cov(i, i);
  if (!(out.total_variance > 0.0)) throw InputError("pca input has zero variance (rank 0)");

  std::vector<std::vector<double>> basis;
  Matrix deflated = cov;
  out.components = Matrix(2, d);
  for (std::size_t comp = 0; comp < 2; ++comp) {
    std::vector<double> v = power_iteration(deflated, basis);
    if (norm(v) == 0.0) {
      // d == 1: the second direction does not exist; leave a zero component.
      out.eigenvalues[comp] = 0.0;
      basis.push_back(v);
      continue;
    }
    fix_sign(v);
    const double lambda = std::max(0.0, rayleigh(cov, v));
    out.eigenvalues[comp] = lambda;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) deflated(i, j) -= lambda * v[i] * v[j];
    }
    std::copy(v.begin(), v.end(), out.components.row(comp).begin());
    basis.push_back(std::move(v));
  }
  out.projection = matmul_nt(centered, out.components);
  return out;
}

Reordered reorder_by_cluster(const Matrix& a, std::span<const std::size_t> labels) {
  if (a.rows() != a.cols() || labels.size() != a.rows()) {
    throw ShapeError("reorder: " + std::to_string(labels.size()) + " labels for a " +
                     a.shape_string() + " matrix");
  }
  Reordered out;
  out.permutation.resize(labels.size());
  std::iota(out.permutation.begin(), out.permutation.end(), std::size_t{0});
  std::stable_sort(out.permutation.begin(), out.permutation.end(),
                   [&](std::size_t x, std::size_t y) { return labels[x] < labels[y]; });
  out.matrix = Matrix(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.matrix(i, j) = a(out.permutation[i], out.permutation[j]);
    }
  }
  return out;
}

Reordered reorder_by_cluster(const bean::CorrelationMatrix& a, std::span<const std::size_t> labels) {
  return reorder_by_cluster(a.inner, labels);
}

}  // namespace beanlab::analysis
