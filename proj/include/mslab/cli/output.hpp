#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "mslab/error.hpp"

namespace mslab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

class IoError : public Error {
 public:
  using Error::Error;
};

struct RunContext {
  std::filesystem::path out_dir;
  std::string manifest_hash;
};

// Creates out_dir and writes manifest.txt (canonical config plus its hash).
RunContext write_manifest(const std::filesystem::path& out_dir, const std::string& canonical);

// A value in a CSV row or report line. Reals print in shortest round-trip
// form so reruns compare byte for byte.
class Cell {
 public:
  Cell(double v) : v_(v) {}
  Cell(int v) : v_(static_cast<std::int64_t>(v)) {}
  Cell(long v) : v_(static_cast<std::int64_t>(v)) {}
  Cell(long long v) : v_(static_cast<std::int64_t>(v)) {}
  Cell(unsigned v) : v_(static_cast<std::uint64_t>(v)) {}
  Cell(unsigned long v) : v_(static_cast<std::uint64_t>(v)) {}
  Cell(unsigned long long v) : v_(static_cast<std::uint64_t>(v)) {}
  Cell(bool v) : v_(std::string(v ? "true" : "false")) {}
  Cell(const char* v) : v_(std::string(v)) {}
  Cell(std::string v) : v_(std::move(v)) {}

  std::string str() const;

 private:
  std::variant<double, std::int64_t, std::uint64_t, std::string> v_;
};

class CsvWriter {
 public:
  CsvWriter(const RunContext& ctx, const std::string& name, std::vector<std::string> columns,
            const std::vector<std::string>& notes = {});
  void row(const std::vector<Cell>& cells);
  // Flushes and reports write failures.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t n_columns_;
};

// key = value text report with the same comment header as the CSVs.
class Report {
 public:
  Report(const RunContext& ctx, const std::string& name);
  void add(const std::string& key, const Cell& value);
  void section(const std::string& title);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Opens out_dir/name for writing with the version and hash lines already
// written. Throws IoError naming the path.
std::ofstream open_output(const RunContext& ctx, const std::string& name,
                          std::filesystem::path* path = nullptr);

}  // namespace mslab::cli
