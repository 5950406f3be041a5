#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mslab/density.hpp"
#include "mslab/stochastic_matrix.hpp"

namespace mslab {

// The unimodal family x -> c (1 - 2 x^2) on I = [-1, 1], c in (0, 1].
// Maps I into [-c, c].
class QuadraticMap {
 public:
  explicit QuadraticMap(double c);

  double c() const noexcept { return c_; }

  // Throws DomainError for |x| > 1.
  double eval(double x) const;
  // Unchecked evaluation for inner loops whose iterates stay in I.
  double operator()(double x) const noexcept { return c_ * (1.0 - 2.0 * x * x); }
  double derivative(double x) const noexcept { return -4.0 * c_ * x; }

  // Fixed point in [0, c]: the positive root of 2c x^2 + x - c = 0.
  double fixed_point() const noexcept;

 private:
  double c_;
};

// s[0] = x0, s[i+1] = m(s[i]); n points.
std::vector<double> orbit(const QuadraticMap& m, double x0, std::size_t n);

// Exact Ulam matrix of the map's Perron-Frobenius operator on n bins:
// entry (i, j) = Leb(bin_i intersect m^{-1}(bin_j)) / Leb(bin_i).
StochasticMatrix map_transfer_matrix(const QuadraticMap& m, std::size_t n_bins);

enum class DensityProvider { Analytic, Ulam, OrbitHistogram };

struct DensityRequest {
  DensityProvider provider = DensityProvider::Ulam;
  std::size_t n_bins = 1024;
  // Power-iteration steps (ulam) or orbit length after burn-in (orbit-histogram).
  std::size_t budget = 100000;
  std::uint64_t seed = 1;  // initial point of the orbit-histogram provider
};

inline constexpr std::size_t kOrbitBurnIn = 1000;
inline constexpr double kUlamDensityTol = 1e-10;

// Invariant density h of the map.
//  analytic: arcsine law, only for c = 1 (UnsupportedError otherwise).
//  ulam: fixed density of map_transfer_matrix by power iteration from the
//        uniform density; ConvergenceError if the L1 change stays above 1e-10.
//  orbit-histogram: visit histogram of a seeded orbit, budget >= 1e5.
DensityOnI invariant_density(const QuadraticMap& m, const DensityRequest& request);

}  // namespace mslab
