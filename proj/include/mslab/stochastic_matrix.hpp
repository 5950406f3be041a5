#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mslab {

// Row-stochastic matrix stored row by row, each row as a dense band
// [first(i), last(i)). Transition rows of interval maps and of the Markov
// kernel p_k are contiguous, so the band is a tight fit.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  explicit StochasticMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // Stores row i from a full-length vector, trimming zeros at both ends.
  // Distinct rows may be set concurrently.
  void set_row(std::size_t i, std::span<const double> full_row);

  std::size_t first(std::size_t i) const { return first_[i]; }
  std::size_t last(std::size_t i) const { return first_[i] + rows_[i].size(); }
  std::span<const double> band(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> dense_row(std::size_t i) const;

  // out = in * P (push a row vector of masses forward one step).
  void apply(std::span<const double> in, std::span<double> out) const;

  // Largest |row sum - 1|.
  double max_row_defect() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> first_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace mslab
