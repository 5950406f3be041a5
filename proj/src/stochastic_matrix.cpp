#include "mslab/stochastic_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "mslab/error.hpp"

namespace mslab {

StochasticMatrix::StochasticMatrix(std::size_t n) : n_(n), first_(n, 0), rows_(n) {}

void StochasticMatrix::set_row(std::size_t i, std::span<const double> full_row) {
  if (full_row.size() != n_ || i >= n_) throw ShapeError("row does not fit the matrix");
  std::size_t lo = 0;
  while (lo < n_ && full_row[lo] == 0.0) ++lo;
  std::size_t hi = n_;
  while (hi > lo && full_row[hi - 1] == 0.0) --hi;
  first_[i] = lo;
  rows_[i].assign(full_row.begin() + static_cast<std::ptrdiff_t>(lo),
                  full_row.begin() + static_cast<std::ptrdiff_t>(hi));
}

std::span<const double> StochasticMatrix::band(std::size_t i) const { return rows_[i]; }

double StochasticMatrix::at(std::size_t i, std::size_t j) const {
  if (j < first(i) || j >= last(i)) return 0.0;
  return rows_[i][j - first_[i]];
}

std::vector<double> StochasticMatrix::dense_row(std::size_t i) const {
  std::vector<double> row(n_, 0.0);
  std::copy(rows_[i].begin(), rows_[i].end(),
            row.begin() + static_cast<std::ptrdiff_t>(first_[i]));
  return row;
}

void StochasticMatrix::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw ShapeError("vector does not match matrix");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double w = in[i];
    if (w == 0.0) continue;
    const auto& row = rows_[i];
    double* dst = out.data() + first_[i];
    for (std::size_t j = 0; j < row.size(); ++j) dst[j] += w * row[j];
  }
}

double StochasticMatrix::max_row_defect() const {
  double worst = 0.0;
  for (const auto& row : rows_) {
    double s = 0.0;
    for (double v : row) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace mslab
