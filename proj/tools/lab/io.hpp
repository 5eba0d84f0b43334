#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace lab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Fixed-format CSV: "# schema=<name>/<version>" then a header row, all
/// numbers printed with %.17g so equal inputs give equal bytes.
class CsvWriter {
 public:
  CsvWriter(std::string schema, int version, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  /// Row with leading text cells followed by numbers.
  void row(const std::vector<std::string>& text, const std::vector<double>& values);
  void write(const fs::path& file) const;

 private:
  std::string header_;
  std::size_t columns_;
  std::string body_;
};

std::string format_number(double v);

void write_json(const fs::path& file, const json& j);
std::string sha256_file(const fs::path& file);

/// Records produced files and writes manifest.json on destruction if
/// finish() was never reached, so failed runs still leave a manifest.
class Manifest {
 public:
  Manifest(fs::path dir, json config);
  ~Manifest();
  Manifest(const Manifest&) = delete;
  Manifest& operator=(const Manifest&) = delete;

  void add(const fs::path& file);
  void finish(int exit_code, const json& error = nullptr);

 private:
  fs::path dir_;
  json config_;
  std::vector<fs::path> files_;
  bool done_ = false;
};

}  // namespace lab
