#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::data {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxHeader {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
};

/// Raw image tensor: count images of rows x cols unsigned bytes.
struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  ///< count * rows * cols

  std::size_t pixels_per_image() const { return rows * cols; }
  /// count x (rows*cols) matrix of raw byte values.
  Matrix as_matrix() const;
};

/// Big-endian magic and dims, then the unsigned-byte payload. Throws FormatError
/// on a wrong magic number (reporting the value found) and LengthError when the
/// payload does not match the header.
IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
/// Throws RangeError for a label above 9, naming the first offending index.
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

/// byte / 255.0, so the range is exactly [0, 1].
Matrix normalize(const IdxImages& images);

}  // namespace beanlab::data
