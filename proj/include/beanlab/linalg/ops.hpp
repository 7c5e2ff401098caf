#pragma once

#include <cstddef>
#include <functional>

#include "beanlab/linalg/matrix.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab {

/// a · b. Throws ShapeError when a.cols != b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);
/// aᵀ · b without forming the transpose. Requires a.rows == b.rows.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a · bᵀ without forming the transpose. Requires a.cols == b.cols.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// a · aᵀ; the upper triangle is computed and mirrored so the result is exactly symmetric.
Matrix outer_gram(const Matrix& a);

Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

Matrix add(const Matrix& a, const Matrix& b);
void add_inplace(Matrix& acc, const Matrix& x, double scale = 1.0);
void scale_inplace(Matrix& a, double s);
Matrix map(const Matrix& a, const std::function<double(double)>& fn);

/// Entries i.i.d. normal(0, stddev²) drawn row-major from rng.
Matrix gaussian_fill(SeededRng& rng, std::size_t rows, std::size_t cols, double stddev);

/// Smallest column index attaining the maximum of the given row.
std::size_t argmax_row(const Matrix& a, std::size_t row);

double sum(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace beanlab
