#include "lab/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lab/version.hpp"

namespace lab {

std::string format_number(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

CsvWriter::CsvWriter(std::string schema, int version, std::vector<std::string> columns) : columns_(columns.size()) {
  header_ = "# schema=" + schema + "/" + std::to_string(version) + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) header_ += (i ? "," : "") + columns[i];
  header_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) { row({}, values); }

void CsvWriter::row(const std::vector<std::string>& text, const std::vector<double>& values) {
  if (text.size() + values.size() != columns_) throw std::logic_error("csv row width mismatch");
  std::string line;
  for (const auto& t : text) line += (line.empty() ? "" : ",") + t;
  for (double v : values) {
    if (!line.empty()) line += ",";
    line += format_number(v);
  }
  body_ += line + "\n";
}

void CsvWriter::write(const fs::path& file) const {
  std::ofstream out(file, std::ios::binary);
  out << header_ << body_;
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file, std::ios::binary);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

std::string sha256_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Manifest::Manifest(fs::path dir, json config) : dir_(std::move(dir)), config_(std::move(config)) {}

Manifest::~Manifest() {
  if (!done_) {
    try {
      finish(3, json{{"kind", "Aborted"}, {"message", "run ended without a status"}});
    } catch (...) {
    }
  }
}

void Manifest::add(const fs::path& file) { files_.push_back(file); }

void Manifest::finish(int exit_code, const json& error) {
  done_ = true;
  fs::create_directories(dir_);
  json files = json::array();
  for (const auto& f : files_) {
    if (!fs::exists(f)) continue;
    files.push_back({{"name", fs::relative(f, dir_).generic_string()},
                     {"bytes", fs::file_size(f)},
                     {"sha256", sha256_file(f)}});
  }
  json m;
  m["tool"] = "radialwave-lab";
  m["version"] = kVersion;
  m["versions"] = {{"eigen", kEigenVersion}, {"compiler", kCompiler}};
  m["config"] = config_;
  m["exit_code"] = exit_code;
  m["status"] = exit_code == 0 ? "ok" : "failed";
  if (!error.is_null()) m["error"] = error;
  m["files"] = files;
  write_json(dir_ / "manifest.json", m);
}

}  // namespace lab
