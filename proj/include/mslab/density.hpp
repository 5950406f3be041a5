#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mslab {

// Uniform partition of I = [-1, 1] into n bins. Bin j covers
// [-1 + 2j/n, -1 + 2(j+1)/n); the last bin is closed on the right.
class Partition {
 public:
  explicit Partition(std::size_t n_bins);

  std::size_t size() const noexcept { return n_; }
  double width() const noexcept { return width_; }
  double lower(std::size_t j) const noexcept { return -1.0 + width_ * static_cast<double>(j); }
  double upper(std::size_t j) const noexcept { return j + 1 == n_ ? 1.0 : lower(j + 1); }
  double center(std::size_t j) const noexcept { return -1.0 + width_ * (static_cast<double>(j) + 0.5); }

  // Bin containing x (left-closed). Throws DomainError if |x| > 1.
  std::size_t bin_of(double x) const;

 private:
  std::size_t n_;
  double width_;
};

// Piecewise-constant probability density on the uniform partition of I,
// stored as probability mass per bin.
class DensityOnI {
 public:
  // Masses must be nonnegative and sum to one within 1e-12.
  explicit DensityOnI(std::vector<double> weights);

  // Rescales nonnegative masses with positive total to unit sum.
  static DensityOnI normalized(std::vector<double> masses);
  static DensityOnI from_counts(std::span<const std::uint64_t> counts);
  static DensityOnI uniform(std::size_t n_bins);
  static DensityOnI point_mass(std::size_t n_bins, std::size_t bin);
  // Normalized visit histogram of the samples.
  static DensityOnI histogram(std::span<const double> samples, std::size_t n_bins);

  std::size_t n_bins() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t j) const { return weights_[j]; }
  Partition partition() const { return Partition(n_bins()); }
  double bin_width() const noexcept { return 2.0 / static_cast<double>(n_bins()); }

  // Density value on bin j: mass / width.
  double density(std::size_t j) const { return weights_[j] / bin_width(); }
  // Density value at x; zero outside I.
  double value_at(double x) const;
  // Distribution function, piecewise linear; 0 left of I and 1 right of it.
  double cdf(double x) const;
  // Prefix sums: cumulative()[j] = mass of bins [0, j). Size n_bins + 1.
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  // 64-bit FNV-1a of the raw mass bytes; identifies h in operator dumps.
  std::uint64_t content_hash() const;

 private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

// Masses of d on the uniform n-bin partition, from d's piecewise-linear CDF.
DensityOnI project(const DensityOnI& d, std::size_t n_bins);

// Sum over bins of |a - b| (twice the total variation distance).
double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace mslab
