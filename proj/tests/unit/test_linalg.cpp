#include <doctest.h>

#include <cmath>
#include <numeric>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/kernels.hpp"
#include "beanlab/linalg/matrix.hpp"
#include "beanlab/linalg/matrix_io.hpp"
#include "beanlab/linalg/ops.hpp"
#include "beanlab/linalg/rng.hpp"
#include "../support/fixtures.hpp"

using namespace beanlab;
using beanlab::testing::random_matrix;

namespace {

Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

/// Restores the dispatch choice after a test pins a backend.
struct BackendGuard {
  kernels::Backend saved = kernels::active_backend();
  ~BackendGuard() { kernels::set_backend(saved); }
};

}  // namespace

TEST_CASE("matmul examples") {
  SeededRng rng(1);
  const Matrix x = random_matrix(rng, 2, 3);
  CHECK(matmul(Matrix::identity(2), x) == x);
  CHECK(matmul(Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{1}, {1}})) ==
        Matrix::from_rows({{3}, {7}}));
  CHECK(matmul(Matrix(4, 2), x) == Matrix(4, 3));
}

TEST_CASE("matmul shape error names both shapes") {
  try {
    matmul(Matrix(2, 3), Matrix(2, 3));
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
  }
}

TEST_CASE("matmul variants agree with the naive product") {
  SeededRng rng(2);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 1 + rng.uniform_index(17), k = 1 + rng.uniform_index(33), n = 1 + rng.uniform_index(19);
    Matrix a = random_matrix(rng, m, k);
    const Matrix b = random_matrix(rng, k, n);
    a(0, 0) = 0.0;  // exercise the zero-skip path
    CHECK(max_abs_diff(matmul(a, b), naive_matmul(a, b)) < 1e-12);
    CHECK(max_abs_diff(matmul_tn(transpose(a), b), naive_matmul(a, b)) < 1e-12);
    CHECK(max_abs_diff(matmul_nt(a, transpose(b)), naive_matmul(a, b)) < 1e-12);
    const Matrix g = outer_gram(a);
    CHECK(max_abs_diff(g, naive_matmul(a, transpose(a))) < 1e-12);
    CHECK(g == transpose(g));
  }
}

TEST_CASE("hadamard and transpose examples") {
  SeededRng rng(3);
  const Matrix x = random_matrix(rng, 3, 4);
  CHECK(hadamard(x, Matrix(3, 4, 1.0)) == x);
  CHECK(hadamard(Matrix::from_rows({{2, 3}}), Matrix::from_rows({{2, 3}})) == Matrix::from_rows({{4, 9}}));
  CHECK(hadamard(x, Matrix(3, 4)) == Matrix(3, 4));
  CHECK_THROWS_AS(hadamard(x, Matrix(4, 3)), ShapeError);
  CHECK(transpose(transpose(x)) == x);
  CHECK(transpose(Matrix::from_rows({{1, 2, 3}})) == Matrix::from_rows({{1}, {2}, {3}}));
  const Matrix sym = outer_gram(x);
  CHECK(transpose(sym) == sym);
}

TEST_CASE("gaussian_fill") {
  SeededRng a(7), b(7);
  CHECK(gaussian_fill(a, 3, 3, 0.0) == Matrix(3, 3));
  (void)gaussian_fill(b, 3, 3, 0.0);
  const Matrix first = gaussian_fill(a, 5, 4, 1.0);
  CHECK(first == gaussian_fill(b, 5, 4, 1.0));
  CHECK_THROWS_AS(gaussian_fill(a, 2, 2, -1.0), InputError);

  SeededRng rng(123);
  const Matrix m = gaussian_fill(rng, 1, 100000, 1.0);
  const double mean = sum(m) / 100000.0;
  double ss = 0.0;
  for (double v : m.values()) ss += (v - mean) * (v - mean);
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(std::sqrt(ss / 99999.0) - 1.0) < 0.02);
}

TEST_CASE("argmax_row") {
  CHECK(argmax_row(Matrix::from_rows({{0, 0, 1}}), 0) == 2);
  CHECK(argmax_row(Matrix::from_rows({{5, 5, 1}}), 0) == 0);
  CHECK(argmax_row(Matrix::from_rows({{-1, -3}}), 0) == 0);
  CHECK_THROWS_AS(argmax_row(Matrix(2, 0), 0), InputError);
  CHECK_THROWS_AS(argmax_row(Matrix(2, 2), 5), InputError);
}

TEST_CASE("rng is reproducible and derive_seed separates streams") {
  SeededRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  SeededRng r(5);
  std::vector<std::size_t> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[r.uniform_index(7)];
  for (auto c : counts) CHECK(std::fabs(static_cast<double>(c) - 10000.0) < 500.0);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  r.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (!kernels::available(kernels::Backend::Avx2)) {
    MESSAGE("AVX2 backend unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& s = kernels::scalar_table();
  const auto& v = *kernels::avx2_table();
  SeededRng rng(99);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 1001u}) {
    std::vector<double> a(n), b(n), w(n), y1(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
      w[i] = rng.normal();
      y1[i] = y2[i] = rng.normal();
    }
    if (n > 2) b[1] = a[1];  // sign(0) case
    const double tol = 1e-12 * (1.0 + static_cast<double>(n));
    CHECK(std::fabs(s.dot(a.data(), b.data(), n) - v.dot(a.data(), b.data(), n)) < tol);
    CHECK(std::fabs(s.l1_dist(a.data(), b.data(), n) - v.l1_dist(a.data(), b.data(), n)) < tol);
    const double pivot = n > 1 ? a[1] : 0.3;
    CHECK(std::fabs(s.signed_weight_sum(pivot, b.data(), w.data(), n) -
                    v.signed_weight_sum(pivot, b.data(), w.data(), n)) < tol);
    s.axpy(0.75, a.data(), y1.data(), n);
    v.axpy(0.75, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) < 1e-14);
  }
}

TEST_CASE("matmul under each backend matches") {
  BackendGuard guard;
  SeededRng rng(8);
  const Matrix a = random_matrix(rng, 13, 29), b = random_matrix(rng, 29, 11);
  kernels::set_backend(kernels::Backend::Scalar);
  const Matrix ref = matmul(a, b);
  const Matrix ref_gram = outer_gram(a);
  CHECK(kernels::backend_name(kernels::active_backend()) == "scalar");
  if (kernels::available(kernels::Backend::Avx2)) {
    kernels::set_backend(kernels::Backend::Avx2);
    CHECK(max_abs_diff(matmul(a, b), ref) < 1e-12);
    CHECK(max_abs_diff(outer_gram(a), ref_gram) < 1e-12);
  } else {
    CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2), ConfigError);
  }
}

TEST_CASE("matrix csv and binary round trips") {
  SeededRng rng(4);
  const Matrix m = random_matrix(rng, 4, 5, -1e3, 1e3);
  CHECK(matrix_from_csv(matrix_to_csv(m)) == m);
  CHECK(matrix_from_binary(matrix_to_binary(m)) == m);
  CHECK(matrix_from_binary(matrix_to_binary(Matrix(0, 3))) == Matrix(0, 3));
  auto bytes = matrix_to_binary(m);
  bytes.pop_back();
  CHECK_THROWS_AS(matrix_from_binary(bytes), LengthError);
  CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n"), ShapeError);
  CHECK_THROWS_AS(matrix_from_csv("1,x\n"), FormatError);
}
