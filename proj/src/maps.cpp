#include "mslab/maps.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mslab/error.hpp"
#include "mslab/parallel.hpp"
#include "mslab/rng.hpp"

namespace mslab {

QuadraticMap::QuadraticMap(double c) : c_(c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw DomainError("map parameter c=" + std::to_string(c) + " outside (0,1]");
  }
}

double QuadraticMap::eval(double x) const {
  if (!(std::abs(x) <= 1.0)) {
    throw DomainError("map argument " + std::to_string(x) + " outside I=[-1,1]");
  }
  return (*this)(x);
}

double QuadraticMap::fixed_point() const noexcept {
  return (-1.0 + std::sqrt(1.0 + 8.0 * c_ * c_)) / (4.0 * c_);
}

std::vector<double> orbit(const QuadraticMap& m, double x0, std::size_t n) {
  if (n == 0) throw DomainError("orbit length must be at least 1");
  std::vector<double> s(n);
  s[0] = x0;
  m.eval(x0);
  for (std::size_t i = 1; i < n; ++i) s[i] = m(s[i - 1]);
  return s;
}

namespace {

// Lebesgue measure of {x in [a, b] : m(x) <= z}.
double sublevel_measure(const QuadraticMap& m, double a, double b, double z) {
  const double c = m.c();
  if (z >= c) return b - a;
  const double s = std::sqrt(0.5 * (1.0 - z / c));
  double len = 0.0;
  if (a < 0.0) {  // increasing branch on [a, min(b, 0)]: m(x) <= z iff x <= -s
    const double q = std::min(b, 0.0);
    len += std::max(0.0, std::min(q, -s) - a);
  }
  if (b > 0.0) {  // decreasing branch on [max(a, 0), b]: m(x) <= z iff x >= s
    const double p = std::max(a, 0.0);
    len += std::max(0.0, b - std::max(p, s));
  }
  return len;
}

}  // namespace

StochasticMatrix map_transfer_matrix(const QuadraticMap& m, std::size_t n_bins) {
  const Partition part(n_bins);
  StochasticMatrix P(n_bins);
  parallel_for(n_bins, [&](std::size_t i) {
    const double a = part.lower(i);
    const double b = part.upper(i);
    std::vector<double> row(n_bins, 0.0);
    double prev = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < n_bins; ++j) {
      const double cur = sublevel_measure(m, a, b, part.upper(j));
      row[j] = std::max(0.0, cur - prev);
      total += row[j];
      prev = cur;
    }
    for (double& v : row) v /= total;
    P.set_row(i, row);
  });
  return P;
}

namespace {

DensityOnI arcsine_density(std::size_t n_bins) {
  const Partition part(n_bins);
  std::vector<double> w(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) {
    w[j] = (std::asin(part.upper(j)) - std::asin(part.lower(j))) / std::numbers::pi;
  }
  return DensityOnI::normalized(std::move(w));
}

DensityOnI ulam_density(const QuadraticMap& m, std::size_t n_bins, std::size_t budget) {
  const StochasticMatrix P = map_transfer_matrix(m, n_bins);
  std::vector<double> f(n_bins, 1.0 / static_cast<double>(n_bins));
  std::vector<double> next(n_bins);
  double change = 0.0;
  for (std::size_t step = 0; step < budget; ++step) {
    P.apply(f, next);
    change = l1_distance(f, next);
    f.swap(next);
    if (change < kUlamDensityTol) return DensityOnI::normalized(std::move(f));
  }
  throw ConvergenceError("invariant density power iteration did not converge in " +
                             std::to_string(budget) + " steps (last L1 change " +
                             std::to_string(change) + ")",
                         f, change);
}

DensityOnI orbit_density(const QuadraticMap& m, std::size_t n_bins, std::size_t length,
                         std::uint64_t seed) {
  if (length < 100000) {
    throw DomainError("orbit-histogram provider needs an orbit of at least 1e5 points");
  }
  Rng rng = make_rng(seed);
  const auto fresh_start = [&] {
    double x = -1.0 + 2.0 * uniform01(rng);
    for (std::size_t i = 0; i < kOrbitBurnIn; ++i) x = m(x);
    return x;
  };
  double x = fresh_start();
  const Partition part(n_bins);
  std::vector<std::uint64_t> counts(n_bins, 0);
  for (std::size_t i = 0; i < length; ++i) {
    ++counts[part.bin_of(x)];
    const double next = m(x);
    // Rounding can land a chaotic orbit exactly on a repelling fixed point,
    // where it would stay forever; restart instead.
    x = (next == x && m.c() == 1.0) ? fresh_start() : next;
  }
  return DensityOnI::from_counts(counts);
}

}  // namespace

DensityOnI invariant_density(const QuadraticMap& m, const DensityRequest& request) {
  switch (request.provider) {
    case DensityProvider::Analytic:
      if (m.c() != 1.0) {
        throw UnsupportedError("analytic invariant density is only known for c=1");
      }
      return arcsine_density(request.n_bins);
    case DensityProvider::Ulam:
      return ulam_density(m, request.n_bins, request.budget);
    case DensityProvider::OrbitHistogram:
      return orbit_density(m, request.n_bins, request.budget, request.seed);
  }
  throw UnsupportedError("unknown density provider");
}

}  // namespace mslab
