#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mslab/density.hpp"
#include "mslab/maps.hpp"
#include "mslab/measures.hpp"
#include "mslab/rng.hpp"

namespace mslab {

// Orbit of the master-slave system
//   x_{i+1} = T1(x_i),  y_{i+1} = (1 - k) T2(y_i) + k T1(x_i).
struct CoupledOrbit {
  QuadraticMap t1;
  QuadraticMap t2;
  double k;
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t size() const noexcept { return xs.size(); }
};

// One step of the slave coordinate. Clamped to I to absorb rounding when both
// images sit at an endpoint.
double slave_step(const QuadraticMap& t1, const QuadraticMap& t2, double k, double x,
                  double y) noexcept;

CoupledOrbit simulate_coupled(const QuadraticMap& t1, const QuadraticMap& t2, double k,
                              double x0, double y0, std::size_t n);

// Draws from a piecewise-constant density by inverting its piecewise-linear
// CDF: one uniform picks the bin and the position inside it.
class HistogramSampler {
 public:
  explicit HistogramSampler(const DensityOnI& density);
  double operator()(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
  std::vector<double> weights_;
  double width_;
};

// Path of the Markov chain Y_{i+1} = (1 - k) T2(Y_i) + k omega_i with omega_i
// i.i.d. from mu.
struct ChainPath {
  double k;
  std::vector<double> ys;
  std::uint64_t seed;
};

// Requires k in (0, 1]; k = 0 has no noise, use simulate_coupled instead.
ChainPath simulate_chain(const QuadraticMap& t2, const DensityOnI& mu, double k, double y0,
                         std::size_t n, std::uint64_t seed);

// Integer cell counts of the pairs (x_i, y_i), i >= burn_in.
struct JointCounts {
  std::size_t n_bins;
  std::vector<std::uint64_t> cells;  // row-major, x-bin major
  std::uint64_t total;

  std::vector<std::uint64_t> x_counts() const;
  std::vector<std::uint64_t> y_counts() const;
};

JointCounts joint_counts(const CoupledOrbit& o, std::size_t n_bins, std::size_t burn_in = 0);

// mu_n (master), nu_n (slave), rho_n (pairs at equal time index).
struct EmpiricalMeasures {
  DensityOnI master;
  DensityOnI slave;
  Hist2D joint;
};

EmpiricalMeasures empirical_measures(const CoupledOrbit& o, std::size_t n_bins,
                                     std::size_t burn_in = 0);

// Histogram of y_i over the times with x_i in x_bin. Throws
// InsufficientVisitsError when the bin has fewer than min_visits visits.
DensityOnI conditional_slave(const CoupledOrbit& o, std::size_t n_bins, std::size_t x_bin,
                             std::size_t min_visits = 100);

struct LyapunovEstimate {
  double value;
  std::size_t clipped;  // terms with |T2'(y_i)| below the clip
};

inline constexpr double kDefaultLyapunovClip = 1e-300;

// (1/n) sum log max(|T2'(y_i)|, clip) over the whole orbit.
LyapunovEstimate transverse_lyapunov(const CoupledOrbit& o, double clip = kDefaultLyapunovClip);

struct LyapunovTracePoint {
  std::size_t n;
  double value;
  std::size_t clipped;
};

// Running estimate recorded every `stride` terms and at the last term.
std::vector<LyapunovTracePoint> transverse_lyapunov_trace(const CoupledOrbit& o,
                                                          std::size_t stride,
                                                          double clip = kDefaultLyapunovClip);

// Mean |x_i - y_i| over the last `tail` points.
double sync_error(const CoupledOrbit& o, std::size_t tail);

}  // namespace mslab
