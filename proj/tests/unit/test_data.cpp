#include <doctest.h>

#include <fstream>

#include "beanlab/data/checkpoint.hpp"
#include "beanlab/data/dataset.hpp"
#include "beanlab/data/files.hpp"
#include "beanlab/data/idx.hpp"
#include "beanlab/errors.hpp"
#include "beanlab/network/mlp.hpp"
#include "../support/fixtures.hpp"

using namespace beanlab;
using namespace beanlab::data;

namespace {

const std::vector<std::uint8_t> kGoldenImages{
    0x00, 0x00, 0x08, 0x03,  // magic
    0x00, 0x00, 0x00, 0x02,  // count
    0x00, 0x00, 0x00, 0x02,  // rows
    0x00, 0x00, 0x00, 0x02,  // cols
    0,    255,  128,  1,     // image 0
    7,    0,    0,    200,   // image 1
};

const std::vector<std::uint8_t> kGoldenLabels{0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x03, 5, 0, 4};

}  // namespace

TEST_CASE("idx golden files") {
  const auto img = parse_idx_images(kGoldenImages);
  CHECK(img.count == 2);
  CHECK(img.rows == 2);
  CHECK(img.cols == 2);
  CHECK(img.as_matrix() == Matrix::from_rows({{0, 255, 128, 1}, {7, 0, 0, 200}}));
  CHECK(parse_idx_labels(kGoldenLabels) == std::vector<std::uint8_t>{5, 0, 4});
  CHECK(encode_idx_images(img) == kGoldenImages);
  CHECK(encode_idx_labels(std::vector<std::uint8_t>{5, 0, 4}) == kGoldenLabels);
}

TEST_CASE("idx errors are classified") {
  CHECK_THROWS_WITH_AS(parse_idx_images(kGoldenLabels), doctest::Contains("0x00000801"), FormatError);
  CHECK_THROWS_AS(parse_idx_labels(kGoldenImages), FormatError);
  auto truncated = kGoldenLabels;
  truncated.pop_back();
  CHECK_THROWS_AS(parse_idx_labels(truncated), LengthError);
  auto img_trunc = kGoldenImages;
  img_trunc.resize(img_trunc.size() - 3);
  CHECK_THROWS_WITH_AS(parse_idx_images(img_trunc), doctest::Contains("should hold 8 bytes"), LengthError);
  auto bad = kGoldenLabels;
  bad[9] = 10;
  CHECK_THROWS_WITH_AS(parse_idx_labels(bad), doctest::Contains("index 1"), RangeError);
  CHECK_THROWS_AS(parse_idx_labels(std::vector<std::uint8_t>{0, 0}), LengthError);
}

TEST_CASE("idx round trips") {
  SeededRng rng(1);
  IdxImages img;
  img.count = 7;
  img.rows = 5;
  img.cols = 3;
  for (std::size_t i = 0; i < 105; ++i) img.pixels.push_back(static_cast<std::uint8_t>(rng.uniform_index(256)));
  const auto back = parse_idx_images(encode_idx_images(img));
  CHECK(back.pixels == img.pixels);
  CHECK(back.count == 7);
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(static_cast<std::uint8_t>(rng.uniform_index(10)));
  CHECK(parse_idx_labels(encode_idx_labels(labels)) == labels);
}

TEST_CASE("idx fuzzing yields classified errors only") {
  SeededRng rng(2);
  std::size_t parsed = 0, rejected = 0;
  for (int t = 0; t < 3000; ++t) {
    std::vector<std::uint8_t> bytes = t % 2 ? kGoldenImages : kGoldenLabels;
    const int edits = 1 + static_cast<int>(rng.uniform_index(4));
    for (int e = 0; e < edits; ++e) {
      switch (rng.uniform_index(3)) {
        case 0:
          if (!bytes.empty()) bytes[rng.uniform_index(bytes.size())] = static_cast<std::uint8_t>(rng.uniform_index(256));
          break;
        case 1: bytes.resize(rng.uniform_index(bytes.size() + 1)); break;
        default: bytes.push_back(static_cast<std::uint8_t>(rng.uniform_index(256)));
      }
    }
    try {
      if (t % 2) {
        (void)parse_idx_images(bytes);
      } else {
        (void)parse_idx_labels(bytes);
      }
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 3000);
  CHECK(rejected > 0);
}

TEST_CASE("normalize") {
  IdxImages img;
  img.count = 1;
  img.rows = 1;
  img.cols = 3;
  img.pixels = {0, 255, 128};
  const Matrix m = normalize(img);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(0, 2) == doctest::Approx(0.50196078431372548).epsilon(1e-15));
  for (int v = 0; v < 256; ++v) {
    img.pixels = {static_cast<std::uint8_t>(v), 0, 0};
    CHECK(std::lround(normalize(img)(0, 0) * 255.0) == v);
  }
}

TEST_CASE("stratified split") {
  LabeledDataset d;
  d.samples = Matrix(100, 1);
  for (std::size_t i = 0; i < 100; ++i) {
    d.samples(i, 0) = static_cast<double>(i) / 100.0;
    d.labels.push_back(static_cast<std::uint8_t>(i % 10));
  }
  const auto [a, b] = stratified_split(d, 0.5, 3);
  CHECK(class_histogram(a) == std::vector<std::size_t>(10, 5));
  CHECK(class_histogram(b) == std::vector<std::size_t>(10, 5));
  CHECK(stratified_split(d, 0.5, 3).first.samples == a.samples);
  CHECK_THROWS_AS(stratified_split(d, 0.0, 3), InputError);
  CHECK_THROWS_AS(stratified_split(d, 1.0, 3), InputError);
  CHECK_THROWS_AS(stratified_split(d, 0.05, 3), InputError);
}

TEST_CASE("mnist loader reads the four files") {
  testing::TempDir dir("mnist");
  testing::write_synthetic_mnist(dir.path(), 3, 2);
  const auto train = load_mnist(dir.path(), MnistSplit::Train);
  const auto test = load_mnist(dir.path(), MnistSplit::Test);
  CHECK(train.size() == 30);
  CHECK(test.size() == 20);
  CHECK(train.samples.cols() == 784);
  CHECK_THROWS_AS(load_mnist(dir.path() / "nope", MnistSplit::Train), IoError);
}

TEST_CASE("checkpoint round trip and errors") {
  testing::TempDir dir("ckpt");
  SeededRng rng(3);
  const net::Mlp model = net::Mlp::create({7, 5, 4, 3}, rng);
  save_checkpoint(model, dir.path() / "a", {{"alpha", 1.0}});
  CHECK(load_checkpoint(dir.path() / "a") == model);

  const auto manifest = dir.path() / "a" / "manifest.json";
  const std::string good = files::read_text(manifest);

  files::write_text(manifest, "{ not json");
  CHECK_THROWS_AS(load_checkpoint(dir.path() / "a"), FormatError);

  auto j = nlohmann::json::parse(good);
  j["version"] = kCheckpointVersion + 1;
  files::write_text(manifest, j.dump());
  CHECK_THROWS_AS(load_checkpoint(dir.path() / "a"), VersionError);

  files::write_text(manifest, good);
  std::filesystem::remove(dir.path() / "a" / "layer1_biases.bin");
  CHECK_THROWS_AS(load_checkpoint(dir.path() / "a"), IoError);

  save_checkpoint(model, dir.path() / "b");
  j = nlohmann::json::parse(good);
  j["dims"][1] = 6;
  files::write_text(dir.path() / "b" / "manifest.json", j.dump());
  CHECK_THROWS_AS(load_checkpoint(dir.path() / "b"), ShapeError);

  CHECK_THROWS_AS(save_checkpoint(net::Mlp{}, dir.path() / "c"), ConfigError);
  CHECK_THROWS_AS(load_checkpoint(dir.path() / "missing"), IoError);
}

TEST_CASE("atomic writes leave no partial file behind") {
  testing::TempDir dir("files");
  files::write_text(dir.path() / "x.txt", "hello");
  CHECK(files::read_text(dir.path() / "x.txt") == "hello");
  CHECK_FALSE(std::filesystem::exists(dir.path() / "x.txt.partial"));
  CHECK_THROWS_AS(files::read_text(dir.path() / "none"), IoError);
}
