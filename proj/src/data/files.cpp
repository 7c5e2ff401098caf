#include "beanlab/data/files.hpp"

#include <fstream>
#include <iterator>

#include "beanlab/errors.hpp"

namespace beanlab::files {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

void write_raw(const fs::path& path, const char* data, std::size_t n) {
  const fs::path partial = path.string() + ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + partial.string() + "' for writing");
    out.write(data, static_cast<std::streamsize>(n));
    if (!out) throw IoError("short write to '" + partial.string() + "'");
  }
  std::error_code ec;
  fs::rename(partial, path, ec);
  if (ec) throw IoError("cannot rename '" + partial.string() + "': " + ec.message());
}

}  // namespace

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  write_raw(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void write_text(const fs::path& path, std::string_view text) {
  write_raw(path, text.data(), text.size());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace beanlab::files
