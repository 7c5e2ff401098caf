#include "beanlab/linalg/ops.hpp"

#include <algorithm>
#include <cmath>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/kernels.hpp"

namespace beanlab {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: cannot multiply " + a.shape_string() + " by " + b.shape_string());
  }
  const auto& k = kernels::active();
  Matrix out(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.row(i).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double s = a(i, p);
      if (s != 0.0) k.axpy(s, b.row(p).data(), dst, n);
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: cannot multiply transpose of " + a.shape_string() + " by " +
                     b.shape_string());
  }
  const auto& k = kernels::active();
  Matrix out(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t s = 0; s < a.rows(); ++s) {
    const double* src = b.row(s).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double v = a(s, i);
      if (v != 0.0) k.axpy(v, src, out.row(i).data(), n);
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: cannot multiply " + a.shape_string() + " by transpose of " +
                     b.shape_string());
  }
  const auto& k = kernels::active();
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      out(i, j) = k.dot(a.row(i).data(), b.row(j).data(), a.cols());
    }
  }
  return out;
}

Matrix outer_gram(const Matrix& a) {
  const auto& k = kernels::active();
  const std::size_t n = a.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = k.dot(a.row(i).data(), a.row(j).data(), a.cols());
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out(a.rows(), a.cols());
  auto o = out.values();
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  add_inplace(out, b);
  return out;
}

void add_inplace(Matrix& acc, const Matrix& x, double scale) {
  require_same_shape(acc, x, "add");
  kernels::active().axpy(scale, x.values().data(), acc.values().data(), acc.size());
}

void scale_inplace(Matrix& a, double s) {
  for (double& v : a.values()) v *= s;
}

Matrix map(const Matrix& a, const std::function<double(double)>& fn) {
  Matrix out(a.rows(), a.cols());
  auto o = out.values();
  auto x = a.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = fn(x[i]);
  return out;
}

Matrix gaussian_fill(SeededRng& rng, std::size_t rows, std::size_t cols, double stddev) {
  if (!(stddev >= 0.0)) throw InputError("gaussian_fill: stddev must be nonnegative");
  Matrix out(rows, cols);
  for (double& v : out.values()) v = stddev * rng.normal();
  return out;
}

std::size_t argmax_row(const Matrix& a, std::size_t row) {
  if (row >= a.rows()) {
    throw InputError("argmax_row: row " + std::to_string(row) + " out of range for " +
                     a.shape_string());
  }
  if (a.cols() == 0) throw InputError("argmax_row: empty row");
  auto r = a.row(row);
  // max_element returns the first maximum, which is the lowest-index tie-break.
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

}  // namespace beanlab
