#include "mslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mslab/error.hpp"

namespace mslab {
namespace {

void require_same_bins(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ShapeError("bin counts differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Hist2D::Hist2D(std::size_t n_bins, std::vector<double> weights)
    : n_(n_bins), weights_(std::move(weights)) {
  if (n_ == 0 || weights_.size() != n_ * n_) {
    throw ShapeError("2-D histogram needs n_bins^2 cells");
  }
  // Compensated sum: large grids of tiny cells would otherwise drift past
  // the tolerance.
  double total = 0.0, carry = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw DomainError("negative or NaN cell mass");
    const double t = total + w;
    carry += std::abs(total) >= w ? (total - t) + w : (w - t) + total;
    total = t;
  }
  total += carry;
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("cell masses sum to " + std::to_string(total) + ", not 1");
  }
}

Hist2D Hist2D::normalized(std::size_t n_bins, std::vector<double> masses) {
  double total = 0.0;
  for (double m : masses) total += m;
  if (!(total > 0.0)) throw DomainError("cannot normalize zero mass");
  for (double& m : masses) m /= total;
  return Hist2D(n_bins, std::move(masses));
}

DensityOnI Hist2D::marginal_x() const {
  std::vector<double> m(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m[i] += at(i, j);
  return DensityOnI(std::move(m));
}

DensityOnI Hist2D::marginal_y() const {
  std::vector<double> m(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m[j] += at(i, j);
  return DensityOnI(std::move(m));
}

double tv_distance(const DensityOnI& a, const DensityOnI& b) {
  return 0.5 * l1_distance(a.weights(), b.weights());
}

double w1_distance(const DensityOnI& a, const DensityOnI& b) {
  require_same_bins(a.n_bins(), b.n_bins());
  const auto& ca = a.cumulative();
  const auto& cb = b.cumulative();
  double s = 0.0;
  for (std::size_t j = 1; j < ca.size(); ++j) s += std::abs(ca[j] - cb[j]);
  return a.bin_width() * s;
}

Hist2D product_measure(const DensityOnI& a, const DensityOnI& b) {
  require_same_bins(a.n_bins(), b.n_bins());
  const std::size_t n = a.n_bins();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = a.weight(i) * b.weight(j);
  return Hist2D(n, std::move(w));
}

Hist2D diagonal_pushforward(const DensityOnI& a) {
  const std::size_t n = a.n_bins();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = a.weight(i);
  return Hist2D(n, std::move(w));
}

double l1_distance(const Hist2D& a, const Hist2D& b) {
  require_same_bins(a.n_bins(), b.n_bins());
  return l1_distance(a.weights(), b.weights());
}

double tv_distance(const Hist2D& a, const Hist2D& b) { return 0.5 * l1_distance(a, b); }

double mean_abs_diff(const Hist2D& joint) {
  const Partition part(joint.n_bins());
  const std::size_t n = joint.n_bins();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = joint.at(i, j);
      if (w != 0.0) s += w * std::abs(part.center(i) - part.center(j));
    }
  return s;
}

double char_function_gap(const Hist2D& joint, const DensityOnI& mu,
                         std::span<const Frequency> t_grid) {
  require_same_bins(joint.n_bins(), mu.n_bins());
  if (t_grid.empty()) throw DomainError("frequency grid is empty");
  const std::size_t n = joint.n_bins();
  const Partition part(n);
  double worst = 0.0;
  for (const auto& [t1, t2] : t_grid) {
    // Per-axis phases factor the 2-D sum: e^{i(t1 x + t2 y)} = e^{i t1 x} e^{i t2 y}.
    std::vector<double> cx(n), sx(n), cy(n), sy(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = part.center(i);
      cx[i] = std::cos(t1 * x);
      sx[i] = std::sin(t1 * x);
      cy[i] = std::cos(t2 * x);
      sy[i] = std::sin(t2 * x);
    }
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row_re = 0.0, row_im = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = joint.at(i, j);
        if (w == 0.0) continue;
        row_re += w * cy[j];
        row_im += w * sy[j];
      }
      re += cx[i] * row_re - sx[i] * row_im;
      im += sx[i] * row_re + cx[i] * row_im;
    }
    double mre = 0.0, mim = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = (t1 + t2) * part.center(i);
      mre += mu.weight(i) * std::cos(phase);
      mim += mu.weight(i) * std::sin(phase);
    }
    worst = std::max(worst, std::hypot(re - mre, im - mim));
  }
  return worst;
}

std::vector<Frequency> default_frequency_grid() {
  constexpr double pi = std::numbers::pi;
  const double axis[] = {-3 * pi, -2 * pi, -pi, pi / 2, pi, 2 * pi, 3 * pi};
  std::vector<Frequency> grid;
  for (double t1 : axis)
    for (double t2 : axis) grid.emplace_back(t1, t2);
  return grid;
}

}  // namespace mslab
