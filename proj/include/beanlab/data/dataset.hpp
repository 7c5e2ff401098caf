#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::data {

inline constexpr std::size_t kNumClasses = 10;

struct LabeledDataset {
  Matrix samples;                    ///< S x features, values in [0, 1]
  std::vector<std::uint8_t> labels;  ///< class ids below kNumClasses
  std::string name;

  std::size_t size() const noexcept { return labels.size(); }
  /// Throws InputError on a row/label count mismatch, out-of-range pixel or label.
  void validate() const;
};

LabeledDataset subset(const LabeledDataset& ds, std::span<const std::size_t> indices,
                      std::string name);

/// Sample indices per class (ascending), for classes 0..kNumClasses-1.
std::vector<std::vector<std::size_t>> indices_by_class(const LabeledDataset& ds);
std::vector<std::size_t> class_histogram(const LabeledDataset& ds);

/// Per-class split: floor(fraction * n_c) samples of each class go to the first
/// part, the rest to the second; which samples is decided by a seeded shuffle.
/// Each part keeps the original sample order. Throws InputError when fraction is
/// outside (0, 1) or a present class cannot contribute to both parts.
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& ds, double fraction,
                                                           std::uint64_t seed);

enum class MnistSplit { Train, Test };

/// Reads {train,t10k}-{images-idx3,labels-idx1}-ubyte from dir.
LabeledDataset load_mnist(const std::filesystem::path& dir, MnistSplit split);

/// --dataset-dir if given, else $BEANLAB_DATA_DIR, else empty.
std::filesystem::path resolve_data_dir(const std::string& flag_value);

}  // namespace beanlab::data
