#pragma once

#include "gph/tensor.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace gph {

/// Repo-wide binary tensor format: magic "GPH1", u32 rank, rank x u64 axis
/// lengths, then little-endian float64 (re, im) pairs in row-major order.
void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

/// Deterministic CSV writing: fixed header, %.17g doubles, '\n' endings.
/// The file is written on destruction.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);
  static std::string num(unsigned long long v);

 private:
  void flush();
  std::string path_;
  std::string buffer_;
  std::size_t columns_;
};

/// Throws when `obj` holds keys outside `allowed` (strict config parsing).
void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                  const std::string& where);

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace gph
