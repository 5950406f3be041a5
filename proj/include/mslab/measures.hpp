#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mslab/density.hpp"

namespace mslab {

// Histogram probability measure on I x I over the squared uniform partition.
// Cell (i, j) holds the mass of x-bin i times y-bin j, stored row-major.
class Hist2D {
 public:
  Hist2D(std::size_t n_bins, std::vector<double> weights);
  static Hist2D normalized(std::size_t n_bins, std::vector<double> masses);

  std::size_t n_bins() const noexcept { return n_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double at(std::size_t i, std::size_t j) const { return weights_[i * n_ + j]; }

  DensityOnI marginal_x() const;
  DensityOnI marginal_y() const;

 private:
  std::size_t n_;
  std::vector<double> weights_;
};

// (1/2) sum |a - b|.
double tv_distance(const DensityOnI& a, const DensityOnI& b);
// L1 distance of the CDFs sampled at the bin edges; Wasserstein-1 on the line.
double w1_distance(const DensityOnI& a, const DensityOnI& b);

Hist2D product_measure(const DensityOnI& a, const DensityOnI& b);
Hist2D diagonal_pushforward(const DensityOnI& a);

// sum |a - b| over cells, and half of it.
double l1_distance(const Hist2D& a, const Hist2D& b);
double tv_distance(const Hist2D& a, const Hist2D& b);

// E|eta1 - eta2| with mass placed at the cell centers.
double mean_abs_diff(const Hist2D& joint);

using Frequency = std::pair<double, double>;

// max over the grid of |phi_joint(t1, t2) - phi_mu(t1 + t2)|, both transforms
// evaluated with mass at bin centers. The second term is the characteristic
// function of mu pushed onto the diagonal.
double char_function_gap(const Hist2D& joint, const DensityOnI& mu,
                         std::span<const Frequency> t_grid);

// {-3pi, -2pi, -pi, pi/2, pi, 2pi, 3pi}^2 minus the origin.
std::vector<Frequency> default_frequency_grid();

}  // namespace mslab
