#include "beanlab/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "beanlab/data/files.hpp"
#include "beanlab/data/idx.hpp"
#include "beanlab/errors.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab::data {

void LabeledDataset::validate() const {
  if (samples.rows() != labels.size()) {
    throw InputError("dataset '" + name + "': " + std::to_string(samples.rows()) + " samples but " +
                     std::to_string(labels.size()) + " labels");
  }
  for (double v : samples.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("dataset '" + name + "': pixel outside [0, 1]");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= kNumClasses) {
      throw InputError("dataset '" + name + "': label " + std::to_string(labels[i]) + " at index " +
                       std::to_string(i));
    }
  }
}

LabeledDataset subset(const LabeledDataset& ds, std::span<const std::size_t> indices, std::string name) {
  LabeledDataset out{Matrix(indices.size(), ds.samples.cols()), {}, std::move(name)};
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t src = indices[r];
    if (src >= ds.size()) throw InputError("subset: index " + std::to_string(src) + " out of range");
    std::copy(ds.samples.row(src).begin(), ds.samples.row(src).end(), out.samples.row(r).begin());
    out.labels.push_back(ds.labels[src]);
  }
  return out;
}

std::vector<std::vector<std::size_t>> indices_by_class(const LabeledDataset& ds) {
  std::vector<std::vector<std::size_t>> out(kNumClasses);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] >= kNumClasses) throw InputError("label out of range at index " + std::to_string(i));
    out[ds.labels[i]].push_back(i);
  }
  return out;
}

std::vector<std::size_t> class_histogram(const LabeledDataset& ds) {
  std::vector<std::size_t> h(kNumClasses, 0);
  for (auto l : ds.labels) ++h.at(l);
  return h;
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& ds, double fraction,
                                                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("split fraction must lie in (0, 1)");
  SeededRng rng(seed);
  std::vector<std::size_t> part_a;
  std::vector<std::size_t> part_b;
  auto by_class = indices_by_class(ds);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    const auto take = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(idx.size())));
    if (idx.size() < 2 || take == 0 || take == idx.size()) {
      throw InputError("stratified split: class " + std::to_string(c) + " has " +
                       std::to_string(idx.size()) + " samples, too few to split at fraction " +
                       std::to_string(fraction));
    }
    rng.shuffle(std::span<std::size_t>(idx));
    part_a.insert(part_a.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    part_b.insert(part_b.end(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end());
  }
  std::sort(part_a.begin(), part_a.end());
  std::sort(part_b.begin(), part_b.end());
  return {subset(ds, part_a, ds.name + "/a"), subset(ds, part_b, ds.name + "/b")};
}

LabeledDataset load_mnist(const std::filesystem::path& dir, MnistSplit split) {
  const std::string prefix = split == MnistSplit::Train ? "train" : "t10k";
  const auto images = parse_idx_images(files::read_bytes(dir / (prefix + "-images-idx3-ubyte")));
  auto labels = parse_idx_labels(files::read_bytes(dir / (prefix + "-labels-idx1-ubyte")));
  if (labels.size() != images.count) {
    throw LengthError("mnist " + prefix + ": " + std::to_string(images.count) + " images but " +
                      std::to_string(labels.size()) + " labels");
  }
  return {normalize(images), std::move(labels), "mnist-" + prefix};
}

std::filesystem::path resolve_data_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("BEANLAB_DATA_DIR")) return env;
  return {};
}

}  // namespace beanlab::data
