#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mslab/density.hpp"
#include "mslab/maps.hpp"
#include "mslab/stochastic_matrix.hpp"

namespace mslab {

// Transition density of Y_{n+1} = (1 - k) T2(Y_n) + k omega, omega ~ h:
//   p_k(y, z) = h((z - (1 - k) T2(y)) / k) / k, zero when the argument leaves I.
double kernel_density(const QuadraticMap& t2, const DensityOnI& h, double k, double y,
                      double z);

// Ulam discretization of the forward operator L_k on a uniform partition.
class UlamOperator {
 public:
  UlamOperator(StochasticMatrix matrix, double k, double c2, std::uint64_t h_hash);

  std::size_t n_bins() const noexcept { return matrix_.size(); }
  double k() const noexcept { return k_; }
  double c2() const noexcept { return c2_; }
  std::uint64_t h_hash() const noexcept { return h_hash_; }
  const StochasticMatrix& matrix() const noexcept { return matrix_; }

  // One application of L_k: masses f pushed forward, f * P.
  DensityOnI apply(const DensityOnI& f) const;
  void apply(std::span<const double> in, std::span<double> out) const { matrix_.apply(in, out); }

 private:
  StochasticMatrix matrix_;
  double k_;
  double c2_;
  std::uint64_t h_hash_;
};

inline constexpr std::size_t kDefaultOperatorBins = 1024;
inline constexpr std::size_t kDefaultSamplesPerBin = 8;

// Row i averages, over samples_per_bin equispaced nodes y of bin i, the exact
// image of h under x -> k x + (1 - k) T2(y), computed from h's piecewise
// linear CDF (no sampling noise). Throws AssemblyError when a row misses unit
// mass by more than 1e-8.
UlamOperator build_ulam(const QuadraticMap& t2, const DensityOnI& h, double k,
                        std::size_t n_bins = kDefaultOperatorBins,
                        std::size_t samples_per_bin = kDefaultSamplesPerBin);

struct StationaryResult {
  DensityOnI density;
  // Steps until the iterate stopped moving: the smallest m with
  // ||f_{m+1} - f_m||_1 < tol. The returned density is f_{m+1}.
  std::size_t iterations;
  double last_change;
};

inline constexpr double kDefaultStationaryTol = 1e-10;
inline constexpr std::size_t kDefaultMaxIter = 100000;

// Power iteration f_{n+1} = L_k f_n. ConvergenceError past max_iter.
StationaryResult stationary_density(const UlamOperator& op, const DensityOnI& f0,
                                    std::size_t max_iter = kDefaultMaxIter,
                                    double tol = kDefaultStationaryTol);

struct RateFit {
  double rate;       // exp(slope)
  double slope;      // of log ||L^n f0 - g||_1 against n
  double r_squared;  // of the linear fit over the window
  std::size_t window_first;
  std::size_t window_last;  // inclusive
  std::vector<double> distances;  // ||L^n f0 - g||_1 for n = 0, 1, ...
};

inline constexpr double kRateWindowLow = 1e-10;
inline constexpr double kRateWindowHigh = 1e-2;

// Least-squares geometric rate over the steps whose distance to g lies in
// [1e-10, 1e-2]. DiagnosticError when the window has fewer than three points.
RateFit empirical_rate(const UlamOperator& op, const DensityOnI& f0, const DensityOnI& g,
                       std::size_t n_steps);

// Random start for uniqueness checks: i.i.d. exponential masses on the bins
// in [first, last), normalized.
DensityOnI random_density(std::size_t n_bins, std::uint64_t seed, std::size_t first = 0,
                          std::size_t last = static_cast<std::size_t>(-1));

// Dump layout: a header line
//   # ulam v1 n_bins=<n> k=<k> c2=<c2> h=<16 hex digits>
// optional further '#' lines, then n rows of n comma-separated entries.
void write_ulam(std::ostream& os, const UlamOperator& op,
                const std::vector<std::string>& extra_comments = {});
UlamOperator read_ulam(std::istream& is);

}  // namespace mslab
