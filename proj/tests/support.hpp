#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "mslab/density.hpp"
#include "mslab/maps.hpp"
#include "mslab/rng.hpp"

namespace testing {

// Invariant density of x -> 0.9 (1 - 2x^2) on 1024 bins, shared across tests.
inline const mslab::DensityOnI& h09() {
  static const mslab::DensityOnI h = [] {
    mslab::DensityRequest req;
    req.provider = mslab::DensityProvider::Ulam;
    req.n_bins = 1024;
    return mslab::invariant_density(mslab::QuadraticMap(0.9), req);
  }();
  return h;
}

// Arcsine law on [-1, 1]: mass of [lo, hi] is (asin hi - asin lo) / pi.
inline double arcsine_mass(double lo, double hi) {
  return (std::asin(hi) - std::asin(lo)) / std::numbers::pi;
}

inline double uniform_in(mslab::Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * mslab::uniform01(rng);
}

// Random density on n bins whose mass avoids `skip` bins at each end; a few
// bins are forced to zero so that supports differ between draws.
inline mslab::DensityOnI random_density(mslab::Rng& rng, std::size_t n, std::size_t skip = 0) {
  std::vector<double> m(n, 0.0);
  for (std::size_t j = skip; j + skip < n; ++j) {
    const double u = mslab::uniform01(rng);
    m[j] = u < 0.1 ? 0.0 : -std::log(1.0 - mslab::uniform01(rng));
  }
  m[skip + (rng() % (n - 2 * skip))] += 1.0;
  return mslab::DensityOnI::normalized(std::move(m));
}

}  // namespace testing
