#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "beanlab/data/dataset.hpp"
#include "beanlab/data/files.hpp"
#include "beanlab/data/idx.hpp"
#include "beanlab/linalg/matrix.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab::testing {

inline Matrix random_matrix(SeededRng& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = lo + (hi - lo) * rng.uniform();
  return m;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("beanlab-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// 28x28 digit-like images: class c lights a 6x6 block at a class-specific
/// spot, plus sparse noise. Easily separable.
inline data::IdxImages synthetic_images(std::size_t per_class, std::uint64_t seed,
                                        std::vector<std::uint8_t>& labels) {
  SeededRng rng(seed);
  data::IdxImages img;
  img.count = per_class * data::kNumClasses;
  img.rows = 28;
  img.cols = 28;
  img.pixels.assign(img.count * 28 * 28, 0);
  labels.clear();
  for (std::size_t i = 0; i < img.count; ++i) {
    const auto c = static_cast<std::uint8_t>(i % data::kNumClasses);
    labels.push_back(c);
    std::uint8_t* px = img.pixels.data() + i * 784;
    const std::size_t r0 = 2 + (c / 5) * 12 + rng.uniform_index(3);
    const std::size_t c0 = 1 + (c % 5) * 5 + rng.uniform_index(2);
    for (std::size_t r = r0; r < r0 + 6; ++r) {
      for (std::size_t q = c0; q < std::min<std::size_t>(c0 + 6, 28); ++q) {
        px[r * 28 + q] = static_cast<std::uint8_t>(180 + rng.uniform_index(76));
      }
    }
    for (int n = 0; n < 20; ++n) px[rng.uniform_index(784)] = static_cast<std::uint8_t>(rng.uniform_index(256));
  }
  return img;
}

/// Writes the four MNIST-named IDX files of a synthetic dataset into dir.
inline void write_synthetic_mnist(const std::filesystem::path& dir, std::size_t train_per_class = 30,
                                  std::size_t test_per_class = 10, std::uint64_t seed = 11) {
  std::vector<std::uint8_t> labels;
  const auto train = synthetic_images(train_per_class, seed, labels);
  files::write_bytes(dir / "train-images-idx3-ubyte", data::encode_idx_images(train));
  files::write_bytes(dir / "train-labels-idx1-ubyte", data::encode_idx_labels(labels));
  const auto test = synthetic_images(test_per_class, seed + 1, labels);
  files::write_bytes(dir / "t10k-images-idx3-ubyte", data::encode_idx_images(test));
  files::write_bytes(dir / "t10k-labels-idx1-ubyte", data::encode_idx_labels(labels));
}

}  // namespace beanlab::testing
