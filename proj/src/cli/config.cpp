#include "mslab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mslab::cli {
namespace {

enum class Kind { Real, Count, Choice, RealList, Bool };

struct Range {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;
  bool hi_open = false;
};

struct Field {
  std::string key;
  Kind kind;
  std::string fallback;
  Range range{};
  std::vector<std::string> choices{};
};

constexpr double kInf = std::numeric_limits<double>::infinity();

Range closed(double lo, double hi) { return {lo, hi, false, false}; }
Range open_closed(double lo, double hi) { return {lo, hi, true, false}; }
Range open(double lo, double hi) { return {lo, hi, true, true}; }
Range at_least(double lo) { return {lo, kInf, false, true}; }
Range positive() { return {0.0, kInf, true, true}; }

const Range kUnit = closed(0, 1);
const Range kI = closed(-1, 1);

using Schema = std::map<std::string, std::vector<Field>>;

const Schema& schema() {
  static const Schema s = {
      {"model",
       {{"c1", Kind::Real, "0.9", open_closed(0, 1)},
        {"c2", Kind::Real, "0.9", open_closed(0, 1)},
        {"h_provider", Kind::Choice, "ulam", {}, {"analytic", "ulam", "orbit-histogram"}},
        {"h_bins", Kind::Count, "1024", at_least(16)},
        {"h_budget", Kind::Count, "100000", at_least(1)},
        {"seed", Kind::Count, "20240611", at_least(0)},
        {"threads", Kind::Count, "1", at_least(1)}}},
      {"simulate",
       {{"k", Kind::Real, "0.5", kUnit},
        {"x0", Kind::Real, "0.1234", kI},
        {"y0", Kind::Real, "-0.4321", kI},
        {"length", Kind::Count, "100000", at_least(1)},
        {"lyapunov_clip", Kind::Real, "1e-300", positive()},
        {"orbit_stride", Kind::Count, "1", at_least(1)},
        {"trace_stride", Kind::Count, "1000", at_least(1)},
        {"sync_tail", Kind::Count, "1000", at_least(1)}}},
      {"stationary",
       {{"k", Kind::Real, "0.5", open_closed(0, 1)},
        {"n_bins", Kind::Count, "1024", at_least(16)},
        {"samples_per_bin", Kind::Count, "8", at_least(1)},
        {"max_iter", Kind::Count, "100000", at_least(1)},
        {"tol", Kind::Real, "1e-10", positive()},
        {"initial", Kind::Choice, "uniform", {}, {"uniform", "point", "random"}},
        {"initial_point", Kind::Real, "0", kI},
        {"rate_steps", Kind::Count, "5000", at_least(1)},
        {"reference_tol", Kind::Real, "1e-14", positive()},
        {"min_r2", Kind::Real, "0.99", open_closed(0, 1)}}},
      {"certify",
       {{"k", Kind::Real, "0.5", open(0, 1)},
        {"grid_points", Kind::Count, "200", at_least(2)},
        {"grid_eps", Kind::Real, "0.01", open(0, 1)},
        {"quad_rel_tol", Kind::Real, "1e-6", positive()},
        {"margin", Kind::Real, "0.05", open(0, 1)},
        {"alpha_bar_frac", Kind::Real, "0.5", open(0, 1)},
        {"R_frac", Kind::Real, "2", {1.0, kInf, true, true}},
        {"shift_grid", Kind::Count, "1024", at_least(2)},
        {"mc_y0", Kind::Real, "0.9", open(-1, 1)},
        {"mc_steps", Kind::Count, "50", at_least(0)},
        {"mc_reps", Kind::Count, "100000", at_least(10000)}}},
      {"weaklimit",
       {{"k_list", Kind::RealList, "0.01, 0.5, 0.99", kUnit},
        {"length", Kind::Count, "10000000", at_least(1)},
        {"n_bins", Kind::Count, "64", at_least(2)},
        {"x0", Kind::Real, "0.1234", kI},
        {"y0", Kind::Real, "-0.4321", kI},
        {"burn_in", Kind::Count, "1", at_least(0)},
        {"mad_tol", Kind::Real, "0.05", positive()},
        {"char_gap_tol", Kind::Real, "0.1", positive()},
        {"product_l1_tol", Kind::Real, "0.15", positive()}}},
      {"question3",
       {{"k_list", Kind::RealList, "0.9, 0.925, 0.95, 0.975, 0.99", open_closed(0, 1)},
        {"length", Kind::Count, "10000000", at_least(1)},
        {"chain_length", Kind::Count, "10000000", at_least(1)},
        {"n_bins", Kind::Count, "128", at_least(2)},
        {"operator_bins", Kind::Count, "1024", at_least(16)},
        {"samples_per_bin", Kind::Count, "8", at_least(1)},
        {"x0", Kind::Real, "0.1234", kI},
        {"y0", Kind::Real, "-0.4321", kI},
        {"min_visits", Kind::Count, "100", at_least(1)},
        {"control_row", Kind::Bool, "true"},
        {"tv_floor", Kind::Real, "0.05", closed(0, 1)},
        {"decay_floor", Kind::Real, "0.01", closed(0, 1)}}},
      {"dimension",
       {{"k_list", Kind::RealList, "0, 0.5, 1", kUnit},
        {"length", Kind::Count, "1000000", at_least(100000)},
        {"burn_in", Kind::Count, "1000", at_least(0)},
        {"q_grid", Kind::RealList, "-4, -2, -1, -0.5, 0, 0.5, 1, 2, 4", {-kInf, kInf, true, true}},
        {"r_min", Kind::Real, "1e-3", positive()},
        {"r_max", Kind::Real, "1e-1", positive()},
        {"r_count", Kind::Count, "24", at_least(2)},
        {"min_correlation", Kind::Real, "0.99", closed(0, 1)},
        {"x0", Kind::Real, "0.1234", kI},
        {"y0", Kind::Real, "-0.4321", kI},
        {"self_test", Kind::Bool, "false"},
        {"self_test_tol", Kind::Real, "0.05", positive()},
        {"delta_tol", Kind::Real, "0.05", positive()}}},
      {"ulam-dump",
       {{"k", Kind::Real, "0.5", open_closed(0, 1)},
        {"n_bins", Kind::Count, "1024", at_least(16)},
        {"samples_per_bin", Kind::Count, "8", at_least(1)}}},
  };
  return s;
}

const Field& find_field(const std::string& section, const std::string& key) {
  const auto sit = schema().find(section);
  if (sit == schema().end()) throw ConfigError("unknown section [" + section + "]");
  for (const auto& f : sit->second) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown key " + section + "." + key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool in_range(double v, const Range& r) {
  const bool lo_ok = r.lo_open ? v > r.lo : v >= r.lo;
  const bool hi_ok = r.hi_open ? v < r.hi : v <= r.hi;
  return lo_ok && hi_ok;
}

std::string describe(const Range& r) {
  auto bound = [](double v) {
    return std::isinf(v) ? std::string(v < 0 ? "-inf" : "inf") : format_real(v);
  };
  return std::string(r.lo_open ? "(" : "[") + bound(r.lo) + ", " + bound(r.hi) +
         (r.hi_open ? ")" : "]");
}

double parse_real(const Field& f, const std::string& name, const std::string& text) {
  double v = 0;
  if (!parse_double(text, v)) throw ConfigError(name + ": '" + text + "' is not a real number");
  if (!in_range(v, f.range)) {
    throw ConfigError(name + ": " + text + " outside " + describe(f.range));
  }
  return v;
}

// Validates `text` for field f and returns its canonical spelling.
std::string canonicalize(const std::string& section, const Field& f, const std::string& text) {
  const std::string name = section + "." + f.key;
  switch (f.kind) {
    case Kind::Real:
      return format_real(parse_real(f, name, text));
    case Kind::Count: {
      double v = 0;
      if (!parse_double(text, v) || v < 0 || v != std::floor(v) || v > 1.8e19) {
        throw ConfigError(name + ": '" + text + "' is not a nonnegative integer");
      }
      if (!in_range(v, f.range)) {
        throw ConfigError(name + ": " + text + " outside " + describe(f.range));
      }
      std::uint64_t u = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), u);
      if (ec == std::errc() && p == text.data() + text.size()) return std::to_string(u);
      return std::to_string(static_cast<std::uint64_t>(v));
    }
    case Kind::Choice:
      if (std::find(f.choices.begin(), f.choices.end(), text) == f.choices.end()) {
        std::string opts;
        for (const auto& c : f.choices) opts += (opts.empty() ? "" : "|") + c;
        throw ConfigError(name + ": '" + text + "' is not one of " + opts);
      }
      return text;
    case Kind::Bool:
      if (text == "true" || text == "1" || text == "yes") return "true";
      if (text == "false" || text == "0" || text == "no") return "false";
      throw ConfigError(name + ": '" + text + "' is not a boolean");
    case Kind::RealList: {
      std::string out;
      std::istringstream in(text);
      std::string item;
      std::size_t n = 0;
      while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(name + ": empty list element");
        out += (n++ ? ", " : "") + format_real(parse_real(f, name, item));
      }
      if (n == 0) throw ConfigError(name + ": list is empty");
      return out;
    }
  }
  throw ConfigError(name + ": unsupported field kind");
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& [section, fields] : schema()) {
    for (const auto& f : fields) values_[section][f.key] = canonicalize(section, f, f.fallback);
  }
}

const std::vector<std::string>& ExperimentConfig::sections() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [section, fields] : schema()) v.push_back(section);
    return v;
  }();
  return names;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) {
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    }
    cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::set(const std::string& section, const std::string& key,
                           const std::string& value) {
  const Field& f = find_field(section, key);
  values_[section][key] = canonicalize(section, f, value);
}

const std::string& ExperimentConfig::raw(const std::string& section, const std::string& key) const {
  find_field(section, key);
  return values_.at(section).at(key);
}

double ExperimentConfig::real(const std::string& section, const std::string& key) const {
  double v = 0;
  parse_double(raw(section, key), v);
  return v;
}

std::uint64_t ExperimentConfig::count(const std::string& section, const std::string& key) const {
  return std::stoull(raw(section, key));
}

std::vector<double> ExperimentConfig::reals(const std::string& section,
                                            const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(raw(section, key));
  std::string item;
  while (std::getline(in, item, ',')) {
    double v = 0;
    parse_double(trim(item), v);
    out.push_back(v);
  }
  return out;
}

const std::string& ExperimentConfig::text(const std::string& section, const std::string& key) const {
  return raw(section, key);
}

bool ExperimentConfig::flag(const std::string& section, const std::string& key) const {
  return raw(section, key) == "true";
}

std::string ExperimentConfig::canonical(const std::string& command) const {
  std::ostringstream out;
  out << "command = " << command << '\n';
  for (const std::string& section : {std::string("model"), command}) {
    if (!values_.count(section)) continue;
    out << '[' << section << "]\n";
    for (const auto& f : schema().at(section)) {
      out << f.key << " = " << values_.at(section).at(f.key) << '\n';
    }
  }
  return out.str();
}

}  // namespace mslab::cli
