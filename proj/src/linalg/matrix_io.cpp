#include "beanlab/linalg/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>

#include "beanlab/data/files.hpp"
#include "beanlab/errors.hpp"

namespace beanlab {
namespace {

void put_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      const int n = std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out.append(buf, static_cast<std::size_t>(n));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(std::string_view text) {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = line.find(',');
      const std::string field(line.substr(0, comma));
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size()) {
        throw FormatError("matrix csv: cannot parse '" + field + "' on row " + std::to_string(rows));
      }
      data.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ShapeError("matrix csv: row " + std::to_string(rows) + " has " + std::to_string(count) +
                       " fields, expected " + std::to_string(cols));
    }
    ++rows;
  }
  return Matrix(rows, cols, std::move(data));
}

std::vector<std::uint8_t> matrix_to_binary(const Matrix& m) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 8 * m.size());
  put_u64_le(out, m.rows());
  put_u64_le(out, m.cols());
  for (double v : m.values()) put_u64_le(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Matrix matrix_from_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) {
    throw LengthError("matrix binary: header needs 16 bytes, got " + std::to_string(bytes.size()));
  }
  const std::uint64_t rows = get_u64_le(bytes.data());
  const std::uint64_t cols = get_u64_le(bytes.data() + 8);
  const std::uint64_t payload = bytes.size() - 16;
  if (cols != 0 && rows > payload / 8 / cols) {
    throw LengthError("matrix binary: " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " needs " + std::to_string(16 + rows * cols * 8) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  if (payload != rows * cols * 8) {
    throw LengthError("matrix binary: expected " + std::to_string(16 + rows * cols * 8) +
                      " bytes, got " + std::to_string(bytes.size()));
  }
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<double>(get_u64_le(bytes.data() + 16 + 8 * i));
  }
  return Matrix(rows, cols, std::move(data));
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  files::write_text(path, matrix_to_csv(m));
}

void save_matrix_binary(const Matrix& m, const std::filesystem::path& path) {
  files::write_bytes(path, matrix_to_binary(m));
}

Matrix load_matrix_binary(const std::filesystem::path& path) {
  return matrix_from_binary(files::read_bytes(path));
}

}  // namespace beanlab
