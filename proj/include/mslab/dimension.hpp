#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mslab {

struct FitDiagnostics {
  double r_min;
  double r_max;
  double correlation;  // |Pearson| of the log-log fit
  double r_squared;
  bool reliable;       // correlation >= the requested threshold
};

struct DimensionSpectrum {
  std::vector<double> q;
  std::vector<double> d;
  std::vector<FitDiagnostics> fits;
};

// Number of sample points within distance r (closed ball) of each point,
// the point itself included. `sorted` must be ascending.
std::vector<std::uint64_t> ball_counts(std::span<const double> sorted, double r);

struct DimensionOptions {
  double min_correlation = 0.99;
  std::size_t min_points = 100000;
};

// Generalized dimensions from fixed-radius neighbor counts:
//   q != 1: D_q = slope of log[(1/N) sum (c_i/N)^{q-1}] vs log r, over (q - 1)
//   q == 1: D_1 = slope of (1/N) sum log(c_i/N) vs log r
// q within 1e-6 of 1 takes the second branch. r_grid must span 1.5 decades.
DimensionSpectrum dq_estimate(std::span<const double> points, std::span<const double> q_grid,
                              std::span<const double> r_grid,
                              const DimensionOptions& options = {});

// |D_q(slave) - D_q(master)| per q. ShapeError when the q grids differ.
std::vector<std::pair<double, double>> delta_dq(const DimensionSpectrum& master,
                                                const DimensionSpectrum& slave);

std::vector<double> default_q_grid();
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);
std::vector<double> default_r_grid();

}  // namespace mslab
