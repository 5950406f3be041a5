#include "mslab/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "mslab/error.hpp"

namespace mslab {

Partition::Partition(std::size_t n_bins)
    : n_(n_bins), width_(2.0 / static_cast<double>(n_bins)) {
  if (n_bins == 0) throw DomainError("partition needs at least one bin");
}

std::size_t Partition::bin_of(double x) const {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw DomainError("point " + std::to_string(x) + " outside I=[-1,1]");
  }
  const auto j = static_cast<std::size_t>((x + 1.0) * (static_cast<double>(n_) * 0.5));
  return j < n_ ? j : n_ - 1;
}

DensityOnI::DensityOnI(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("density needs at least one bin");
  cumulative_.resize(weights_.size() + 1);
  cumulative_[0] = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (!(weights_[j] >= 0.0)) {
      throw DomainError("negative or NaN mass in bin " + std::to_string(j));
    }
    cumulative_[j + 1] = cumulative_[j] + weights_[j];
  }
  if (std::abs(cumulative_.back() - 1.0) > 1e-12) {
    throw DomainError("bin masses sum to " + std::to_string(cumulative_.back()) +
                      ", not 1");
  }
}

DensityOnI DensityOnI::normalized(std::vector<double> masses) {
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0)) throw DomainError("negative or NaN mass");
    total += m;
  }
  if (!(total > 0.0)) throw DomainError("cannot normalize zero mass");
  for (double& m : masses) m /= total;
  return DensityOnI(std::move(masses));
}

DensityOnI DensityOnI::from_counts(std::span<const std::uint64_t> counts) {
  std::vector<double> masses(counts.begin(), counts.end());
  return normalized(std::move(masses));
}

DensityOnI DensityOnI::uniform(std::size_t n_bins) {
  return DensityOnI(std::vector<double>(n_bins, 1.0 / static_cast<double>(n_bins)));
}

DensityOnI DensityOnI::point_mass(std::size_t n_bins, std::size_t bin) {
  if (bin >= n_bins) throw DomainError("point mass bin out of range");
  std::vector<double> w(n_bins, 0.0);
  w[bin] = 1.0;
  return DensityOnI(std::move(w));
}

DensityOnI DensityOnI::histogram(std::span<const double> samples, std::size_t n_bins) {
  const Partition part(n_bins);
  std::vector<std::uint64_t> counts(n_bins, 0);
  for (double s : samples) ++counts[part.bin_of(s)];
  return from_counts(counts);
}

double DensityOnI::value_at(double x) const {
  if (!(x >= -1.0 && x <= 1.0)) return 0.0;
  return density(partition().bin_of(x));
}

double DensityOnI::cdf(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double scaled = (x + 1.0) * (static_cast<double>(n_bins()) * 0.5);
  auto j = static_cast<std::size_t>(scaled);
  if (j >= n_bins()) j = n_bins() - 1;
  const double frac = scaled - static_cast<double>(j);
  return cumulative_[j] + weights_[j] * frac;
}

std::uint64_t DensityOnI::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double w : weights_) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &w, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

DensityOnI project(const DensityOnI& d, std::size_t n_bins) {
  if (n_bins == d.n_bins()) return d;
  if (n_bins == 0) throw DomainError("projection needs at least one bin");
  std::vector<double> masses(n_bins);
  if (d.n_bins() % n_bins == 0) {
    const std::size_t group = d.n_bins() / n_bins;
    for (std::size_t j = 0; j < d.n_bins(); ++j) masses[j / group] += d.weight(j);
  } else {
    const Partition p(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j) {
      masses[j] = std::max(0.0, d.cdf(p.upper(j)) - d.cdf(p.lower(j)));
    }
  }
  return DensityOnI::normalized(std::move(masses));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("bin counts differ: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  return s;
}

}  // namespace mslab
