#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mslab/error.hpp"

namespace mslab::cli {

// Raised for unreadable files, unknown sections or keys, and out-of-range
// values. The message names the offending field as section.key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration: a flat key = value file split into [sections],
// one per subcommand plus [model] for the shared map parameters. Every key
// has a default; unknown keys are rejected.
class ExperimentConfig {
 public:
  // Defaults for every section.
  ExperimentConfig();

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  // Applies a command-line override; validated like a file entry.
  void set(const std::string& section, const std::string& key, const std::string& value);

  double real(const std::string& section, const std::string& key) const;
  std::uint64_t count(const std::string& section, const std::string& key) const;
  std::vector<double> reals(const std::string& section, const std::string& key) const;
  const std::string& text(const std::string& section, const std::string& key) const;
  bool flag(const std::string& section, const std::string& key) const;

  // Resolved [model] and [command] sections in canonical form, preceded by
  // the command line. Stable under reordering and reformatting of the input.
  std::string canonical(const std::string& command) const;

  static const std::vector<std::string>& sections();

 private:
  const std::string& raw(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> values_;
};

// 16 hex digits of the 64-bit FNV-1a hash of `text`.
std::string content_hash(const std::string& text);

// Shortest round-trip decimal form.
std::string format_real(double v);

}  // namespace mslab::cli
