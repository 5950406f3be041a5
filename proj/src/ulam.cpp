#include "mslab/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "mslab/error.hpp"
#include "mslab/parallel.hpp"
#include "mslab/rng.hpp"

namespace mslab {
namespace {

void require_noisy_coupling(double k) {
  if (k == 0.0) throw DomainError("k=0 makes the kernel a Dirac mass");
  if (!(k > 0.0 && k <= 1.0)) {
    throw DomainError("coupling k=" + std::to_string(k) + " outside (0,1]");
  }
}

}  // namespace

double kernel_density(const QuadraticMap& t2, const DensityOnI& h, double k, double y,
                      double z) {
  require_noisy_coupling(k);
  const double arg = (z - (1.0 - k) * t2.eval(y)) / k;
  if (!(arg >= -1.0 && arg <= 1.0)) return 0.0;
  return h.value_at(arg) / k;
}

UlamOperator::UlamOperator(StochasticMatrix matrix, double k, double c2, std::uint64_t h_hash)
    : matrix_(std::move(matrix)), k_(k), c2_(c2), h_hash_(h_hash) {}

DensityOnI UlamOperator::apply(const DensityOnI& f) const {
  if (f.n_bins() != n_bins()) throw ShapeError("density does not match operator");
  std::vector<double> out(n_bins());
  matrix_.apply(f.weights(), out);
  return DensityOnI::normalized(std::move(out));
}

UlamOperator build_ulam(const QuadraticMap& t2, const DensityOnI& h, double k,
                        std::size_t n_bins, std::size_t samples_per_bin) {
  require_noisy_coupling(k);
  if (n_bins < 16) throw DomainError("operator needs at least 16 bins");
  if (samples_per_bin == 0) throw DomainError("samples_per_bin must be positive");

  const Partition part(n_bins);
  StochasticMatrix P(n_bins);
  std::vector<std::string> failures(n_bins);
  parallel_for(n_bins, [&](std::size_t i) {
    std::vector<double> row(n_bins, 0.0);
    const double sub = part.width() / static_cast<double>(samples_per_bin);
    for (std::size_t s = 0; s < samples_per_bin; ++s) {
      const double y = part.lower(i) + (static_cast<double>(s) + 0.5) * sub;
      const double shift = (1.0 - k) * t2(y);
      // Image of I under x -> k x + shift is [shift - k, shift + k].
      const std::size_t lo = part.bin_of(std::clamp(shift - k, -1.0, 1.0));
      const std::size_t hi = part.bin_of(std::clamp(shift + k, -1.0, 1.0));
      double prev = h.cdf((part.lower(lo) - shift) / k);
      for (std::size_t j = lo; j <= hi; ++j) {
        const double cur = h.cdf((part.upper(j) - shift) / k);
        row[j] += cur - prev;
        prev = cur;
      }
    }
    double total = 0.0;
    for (double& v : row) {
      v = std::max(0.0, v / static_cast<double>(samples_per_bin));
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-8) {
      failures[i] = "row " + std::to_string(i) + " carries mass " + std::to_string(total);
      return;
    }
    for (double& v : row) v /= total;
    P.set_row(i, row);
  });
  for (const auto& f : failures) {
    if (!f.empty()) throw AssemblyError("Ulam assembly failed: " + f);
  }
  return UlamOperator(std::move(P), k, t2.c(), h.content_hash());
}

StationaryResult stationary_density(const UlamOperator& op, const DensityOnI& f0,
                                    std::size_t max_iter, double tol) {
  if (f0.n_bins() != op.n_bins()) throw ShapeError("initial density does not match operator");
  std::vector<double> f(f0.weights().begin(), f0.weights().end());
  std::vector<double> next(f.size());
  double change = std::numeric_limits<double>::infinity();
  for (std::size_t step = 1; step <= max_iter; ++step) {
    op.apply(f, next);
    change = l1_distance(f, next);
    f.swap(next);
    if (change < tol) return {DensityOnI::normalized(std::move(f)), step - 1, change};
  }
  throw ConvergenceError("stationary density did not converge in " + std::to_string(max_iter) +
                             " steps (last L1 change " + std::to_string(change) + ")",
                         f, change);
}

RateFit empirical_rate(const UlamOperator& op, const DensityOnI& f0, const DensityOnI& g,
                       std::size_t n_steps) {
  if (f0.n_bins() != op.n_bins() || g.n_bins() != op.n_bins()) {
    throw ShapeError("densities do not match operator");
  }
  RateFit fit{};
  std::vector<double> f(f0.weights().begin(), f0.weights().end());
  std::vector<double> next(f.size());
  fit.distances.push_back(l1_distance(f, g.weights()));
  for (std::size_t n = 1; n <= n_steps && fit.distances.back() >= kRateWindowLow; ++n) {
    op.apply(f, next);
    f.swap(next);
    fit.distances.push_back(l1_distance(f, g.weights()));
  }

  std::vector<std::size_t> window;
  for (std::size_t n = 0; n < fit.distances.size(); ++n) {
    const double d = fit.distances[n];
    if (d >= kRateWindowLow && d <= kRateWindowHigh) window.push_back(n);
  }
  if (window.size() < 3) {
    const bool reached_high = std::any_of(fit.distances.begin(), fit.distances.end(),
                                          [](double d) { return d <= kRateWindowHigh; });
    if (!reached_high) {
      throw DiagnosticError("distance never fell below 1e-2 in " + std::to_string(n_steps) +
                                " steps; decay too slow to fit",
                            DiagnosticError::Kind::TooSlow);
    }
    throw DiagnosticError("distance crossed [1e-10, 1e-2] in " +
                              std::to_string(window.size()) + " steps; decay too fast to fit",
                          DiagnosticError::Kind::TooFast);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t n : window) {
    const double x = static_cast<double>(n);
    const double y = std::log(fit.distances[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const auto m = static_cast<double>(window.size());
  const double cov = sxy - sx * sy / m;
  const double varx = sxx - sx * sx / m;
  const double vary = syy - sy * sy / m;
  fit.slope = cov / varx;
  fit.rate = std::exp(fit.slope);
  fit.r_squared = vary > 0.0 ? (cov * cov) / (varx * vary) : 1.0;
  fit.window_first = window.front();
  fit.window_last = window.back();
  return fit;
}

DensityOnI random_density(std::size_t n_bins, std::uint64_t seed, std::size_t first,
                          std::size_t last) {
  last = std::min(last, n_bins);
  if (first >= last) throw DomainError("empty support for random density");
  Rng rng = make_rng(seed);
  std::vector<double> w(n_bins, 0.0);
  for (std::size_t j = first; j < last; ++j) w[j] = -std::log1p(-uniform01(rng));
  return DensityOnI::normalized(std::move(w));
}

void write_ulam(std::ostream& os, const UlamOperator& op,
                const std::vector<std::string>& extra_comments) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << op.h_hash();
  os << std::setprecision(17);
  os << "# ulam v1 n_bins=" << op.n_bins() << " k=" << op.k() << " c2=" << op.c2()
     << " h=" << hash.str() << '\n';
  for (const auto& line : extra_comments) os << "# " << line << '\n';
  const std::size_t n = op.n_bins();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = op.matrix().dense_row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j) os << ',';
      os << row[j];
    }
    os << '\n';
  }
}

UlamOperator read_ulam(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ulam v1 ", 0) != 0) {
    throw DomainError("not an ulam v1 dump");
  }
  std::size_t n = 0;
  double k = 0, c2 = 0;
  std::uint64_t hash = 0;
  std::istringstream fields(line.substr(10));
  std::string tok;
  while (fields >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw DomainError("bad header field '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "n_bins") n = std::stoul(val);
    else if (key == "k") k = std::stod(val);
    else if (key == "c2") c2 = std::stod(val);
    else if (key == "h") hash = std::stoull(val, nullptr, 16);
    else throw DomainError("unknown header field '" + key + "'");
  }
  if (n == 0) throw DomainError("ulam header lacks n_bins");
  StochasticMatrix P(n);
  std::vector<double> row(n);
  std::size_t i = 0;
  while (i < n && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream cells(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(cells, cell, ',')) {
      if (j >= n) throw ShapeError("row " + std::to_string(i) + " has too many entries");
      row[j++] = std::stod(cell);
    }
    if (j != n) throw ShapeError("row " + std::to_string(i) + " has too few entries");
    P.set_row(i++, row);
  }
  if (i != n) throw ShapeError("dump has " + std::to_string(i) + " rows, expected " + std::to_string(n));
  return UlamOperator(std::move(P), k, c2, hash);
}

}  // namespace mslab
