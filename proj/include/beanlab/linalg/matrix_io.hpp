#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab {

// Text form: one row per line, comma separated, 17 significant digits.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(std::string_view text);

// Binary form: u64 rows, u64 cols, then rows*cols f64, all little-endian.
std::vector<std::uint8_t> matrix_to_binary(const Matrix& m);
Matrix matrix_from_binary(std::span<const std::uint8_t> bytes);

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);
void save_matrix_binary(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix_binary(const std::filesystem::path& path);

}  // namespace beanlab
