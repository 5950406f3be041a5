#include "mslab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mslab/error.hpp"
#include "mslab/parallel.hpp"

namespace mslab {
namespace {

struct LineFit {
  double slope;
  double correlation;
  double r_squared;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  // A flat response is fitted perfectly by a zero slope.
  if (syy <= 1e-300 * std::max(1.0, my * my)) return {slope, 1.0, 1.0};
  const double rho = sxy / std::sqrt(sxx * syy);
  return {slope, std::abs(rho), rho * rho};
}

}  // namespace

std::vector<std::uint64_t> ball_counts(std::span<const double> sorted, double r) {
  const std::size_t n = sorted.size();
  std::vector<std::uint64_t> counts(n);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (sorted[i] - sorted[lo] > r) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < n && sorted[hi + 1] - sorted[i] <= r) ++hi;
    counts[i] = hi - lo + 1;
  }
  return counts;
}

DimensionSpectrum dq_estimate(std::span<const double> points, std::span<const double> q_grid,
                              std::span<const double> r_grid, const DimensionOptions& options) {
  if (points.size() < std::max<std::size_t>(2, options.min_points)) {
    throw InputSizeError("dimension estimate needs at least " +
                         std::to_string(std::max<std::size_t>(2, options.min_points)) +
                         " points, got " + std::to_string(points.size()));
  }
  if (q_grid.empty()) throw DomainError("q grid is empty");
  if (r_grid.size() < 2) throw DomainError("r grid needs at least two radii");
  const auto [rmin_it, rmax_it] = std::minmax_element(r_grid.begin(), r_grid.end());
  if (!(*rmin_it > 0.0) || std::log10(*rmax_it / *rmin_it) < 1.5 - 1e-12) {
    throw DomainError("r grid must be positive and span at least 1.5 decades");
  }

  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto total = static_cast<double>(n);

  // moments[r][q]: log S(r) for q != 1, mean log mass for q == 1.
  std::vector<std::vector<double>> moments(r_grid.size(), std::vector<double>(q_grid.size()));
  parallel_for(r_grid.size(), [&](std::size_t ri) {
    const auto counts = ball_counts(sorted, r_grid[ri]);
    // Tally equal counts so each distinct ball mass is raised to a power once.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> tally;
    {
      std::vector<std::uint64_t> c(counts);
      std::sort(c.begin(), c.end());
      for (std::size_t i = 0; i < c.size();) {
        std::size_t j = i;
        while (j < c.size() && c[j] == c[i]) ++j;
        tally.emplace_back(c[i], j - i);
        i = j;
      }
    }
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
      const double q = q_grid[qi];
      double acc = 0.0;
      if (std::abs(q - 1.0) < 1e-6) {
        for (const auto& [c, mult] : tally) {
          acc += static_cast<double>(mult) * std::log(static_cast<double>(c) / total);
        }
        moments[ri][qi] = acc / total;
      } else {
        for (const auto& [c, mult] : tally) {
          acc += static_cast<double>(mult) * std::pow(static_cast<double>(c) / total, q - 1.0);
        }
        moments[ri][qi] = std::log(acc / total);
      }
    }
  });

  std::vector<double> log_r(r_grid.size());
  for (std::size_t ri = 0; ri < r_grid.size(); ++ri) log_r[ri] = std::log(r_grid[ri]);

  DimensionSpectrum spec;
  for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
    const double q = q_grid[qi];
    std::vector<double> ys(r_grid.size());
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) ys[ri] = moments[ri][qi];
    const LineFit fit = fit_line(log_r, ys);
    const bool info = std::abs(q - 1.0) < 1e-6;
    spec.q.push_back(q);
    spec.d.push_back(info ? fit.slope : fit.slope / (q - 1.0));
    spec.fits.push_back({*rmin_it, *rmax_it, fit.correlation, fit.r_squared,
                         fit.correlation >= options.min_correlation});
  }
  return spec;
}

std::vector<std::pair<double, double>> delta_dq(const DimensionSpectrum& master,
                                                const DimensionSpectrum& slave) {
  if (master.q != slave.q) throw ShapeError("spectra use different q grids");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < master.q.size(); ++i) {
    out.emplace_back(master.q[i], std::abs(slave.d[i] - master.d[i]));
  }
  return out;
}

std::vector<double> default_q_grid() { return {-4, -2, -1, -0.5, 0, 0.5, 1, 2, 4}; }

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw DomainError("bad geometric grid");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.back() = hi;
  return g;
}

std::vector<double> default_r_grid() { return geometric_grid(1e-3, 1e-1, 24); }

}  // namespace mslab
