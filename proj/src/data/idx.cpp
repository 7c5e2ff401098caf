#include "beanlab/data/idx.hpp"

#include <cstdio>
#include <string>

#include "beanlab/errors.hpp"

namespace beanlab::data {
namespace {

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

IdxHeader read_header(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic,
                      std::size_t ndims) {
  if (bytes.size() < 4) {
    throw LengthError("idx: need 4 bytes for the magic number, got " + std::to_string(bytes.size()));
  }
  IdxHeader h;
  h.magic = read_be32(bytes.data());
  if (h.magic != expected_magic) {
    throw FormatError("idx: expected magic " + hex32(expected_magic) + ", found " + hex32(h.magic));
  }
  const std::size_t header_len = 4 + 4 * ndims;
  if (bytes.size() < header_len) {
    throw LengthError("idx: header needs " + std::to_string(header_len) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  for (std::size_t d = 0; d < ndims; ++d) h.dims.push_back(read_be32(bytes.data() + 4 + 4 * d));
  return h;
}

void check_payload(std::span<const std::uint8_t> bytes, std::size_t header_len,
                   unsigned __int128 expected) {
  const std::uint64_t actual = bytes.size() - header_len;
  if (expected != actual) {
    const std::string want = expected > UINT64_MAX ? std::string("more than 2^64")
                                                   : std::to_string(static_cast<std::uint64_t>(expected));
    throw LengthError("idx: payload should hold " + want + " bytes, found " + std::to_string(actual));
  }
}

}  // namespace

Matrix IdxImages::as_matrix() const {
  Matrix m(count, pixels_per_image());
  auto v = m.values();
  for (std::size_t i = 0; i < pixels.size(); ++i) v[i] = pixels[i];
  return m;
}

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  const IdxHeader h = read_header(bytes, kIdxImageMagic, 3);
  const unsigned __int128 expected =
      static_cast<unsigned __int128>(h.dims[0]) * h.dims[1] * h.dims[2];
  check_payload(bytes, 16, expected);
  IdxImages out{h.dims[0], h.dims[1], h.dims[2], {}};
  out.pixels.assign(bytes.begin() + 16, bytes.end());
  return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  const IdxHeader h = read_header(bytes, kIdxLabelMagic, 1);
  check_payload(bytes, 8, h.dims[0]);
  std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.end());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 9) {
      throw RangeError("idx: label " + std::to_string(labels[i]) + " at index " + std::to_string(i) +
                       " exceeds 9");
    }
  }
  return labels;
}

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images) {
  if (images.pixels.size() != images.count * images.pixels_per_image()) {
    throw ShapeError("idx: pixel buffer does not match count x rows x cols");
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.pixels.size());
  put_be32(out, kIdxImageMagic);
  put_be32(out, static_cast<std::uint32_t>(images.count));
  put_be32(out, static_cast<std::uint32_t>(images.rows));
  put_be32(out, static_cast<std::uint32_t>(images.cols));
  out.insert(out.end(), images.pixels.begin(), images.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  put_be32(out, kIdxLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

Matrix normalize(const IdxImages& images) {
  Matrix m(images.count, images.pixels_per_image());
  auto v = m.values();
  for (std::size_t i = 0; i < images.pixels.size(); ++i) v[i] = images.pixels[i] / 255.0;
  return m;
}

}  // namespace beanlab::data
