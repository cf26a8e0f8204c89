#include "gph/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "tensor files are little-endian; this build targets LE hosts");

namespace gph {
namespace {

constexpr char kMagic[4] = {'G', 'P', 'H', '1'};

}  // namespace

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_tensor: cannot open " + path.string());
  out.write(kMagic, 4);
  const auto rank = static_cast<std::uint32_t>(t.rank());
  out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
  for (auto s : t.shape()) {
    const auto axis = static_cast<std::uint64_t>(s);
    out.write(reinterpret_cast<const char*>(&axis), sizeof(axis));
  }
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(cplx)));
  if (!out) throw std::runtime_error("write_tensor: write failed for " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_tensor: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_tensor: bad magic in " + path.string());
  std::uint32_t rank = 0;
  in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
  if (!in || rank == 0 || rank > 64)
    throw std::runtime_error("read_tensor: bad rank in " + path.string());
  std::vector<std::size_t> shape(rank);
  for (auto& s : shape) {
    std::uint64_t axis = 0;
    in.read(reinterpret_cast<char*>(&axis), sizeof(axis));
    if (!in || axis == 0) throw std::runtime_error("read_tensor: bad axis in " + path.string());
    s = static_cast<std::size_t>(axis);
  }
  Tensor t(shape);
  in.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(t.size() * sizeof(cplx)));
  if (!in) throw std::runtime_error("read_tensor: truncated data in " + path.string());
  return t;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : path_(path.string()), columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::num(unsigned long long v) { return std::to_string(v); }

void CsvWriter::flush() {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_);
  out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
}

CsvWriter::~CsvWriter() {
  try {
    flush();
  } catch (...) {
    // destructor must not throw; a failed flush surfaces as a missing file
  }
}

void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const auto& a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_json: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_json: cannot open " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace gph
