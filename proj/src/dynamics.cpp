#include "mslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mslab/error.hpp"

namespace mslab {
namespace {

void require_coupling(double k, bool allow_zero) {
  const bool ok = allow_zero ? (k >= 0.0 && k <= 1.0) : (k > 0.0 && k <= 1.0);
  if (!ok) {
    throw DomainError("coupling k=" + std::to_string(k) +
                      (allow_zero ? " outside [0,1]" : " outside (0,1]"));
  }
}

void require_in_interval(double v, const char* name) {
  if (!(std::abs(v) <= 1.0)) {
    throw DomainError(std::string(name) + "=" + std::to_string(v) + " outside I=[-1,1]");
  }
}

}  // namespace

double slave_step(const QuadraticMap& t1, const QuadraticMap& t2, double k, double x,
                  double y) noexcept {
  return std::clamp((1.0 - k) * t2(y) + k * t1(x), -1.0, 1.0);
}

CoupledOrbit simulate_coupled(const QuadraticMap& t1, const QuadraticMap& t2, double k,
                              double x0, double y0, std::size_t n) {
  require_coupling(k, true);
  require_in_interval(x0, "x0");
  require_in_interval(y0, "y0");
  if (n == 0) throw DomainError("orbit length must be at least 1");
  CoupledOrbit o{t1, t2, k, std::vector<double>(n), std::vector<double>(n)};
  o.xs[0] = x0;
  o.ys[0] = y0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    o.xs[i + 1] = t1(o.xs[i]);
    o.ys[i + 1] = slave_step(t1, t2, k, o.xs[i], o.ys[i]);
  }
  return o;
}

HistogramSampler::HistogramSampler(const DensityOnI& density)
    : cumulative_(density.cumulative()),
      weights_(density.weights().begin(), density.weights().end()),
      width_(density.bin_width()) {}

double HistogramSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  // First bin whose upper cumulative exceeds u; empty bins are never chosen.
  auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  std::size_t j = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  while (weights_[j] == 0.0 && j > 0) --j;
  const double frac = std::clamp((u - cumulative_[j]) / weights_[j], 0.0, 1.0);
  const double x = -1.0 + width_ * (static_cast<double>(j) + frac);
  return std::clamp(x, -1.0, 1.0);
}

ChainPath simulate_chain(const QuadraticMap& t2, const DensityOnI& mu, double k, double y0,
                         std::size_t n, std::uint64_t seed) {
  if (k == 0.0) {
    throw DomainError("chain with k=0 carries no noise; use simulate_coupled with k=0");
  }
  require_coupling(k, false);
  require_in_interval(y0, "y0");
  if (n == 0) throw DomainError("path length must be at least 1");
  const HistogramSampler sample(mu);
  Rng rng = make_rng(seed);
  ChainPath path{k, std::vector<double>(n), seed};
  path.ys[0] = y0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double omega = sample(rng);
    path.ys[i + 1] = std::clamp((1.0 - k) * t2(path.ys[i]) + k * omega, -1.0, 1.0);
  }
  return path;
}

std::vector<std::uint64_t> JointCounts::x_counts() const {
  std::vector<std::uint64_t> c(n_bins, 0);
  for (std::size_t i = 0; i < n_bins; ++i)
    for (std::size_t j = 0; j < n_bins; ++j) c[i] += cells[i * n_bins + j];
  return c;
}

std::vector<std::uint64_t> JointCounts::y_counts() const {
  std::vector<std::uint64_t> c(n_bins, 0);
  for (std::size_t i = 0; i < n_bins; ++i)
    for (std::size_t j = 0; j < n_bins; ++j) c[j] += cells[i * n_bins + j];
  return c;
}

JointCounts joint_counts(const CoupledOrbit& o, std::size_t n_bins, std::size_t burn_in) {
  if (burn_in >= o.size()) throw DomainError("burn-in leaves no orbit points");
  const Partition part(n_bins);
  JointCounts jc{n_bins, std::vector<std::uint64_t>(n_bins * n_bins, 0), 0};
  for (std::size_t i = burn_in; i < o.size(); ++i) {
    ++jc.cells[part.bin_of(o.xs[i]) * n_bins + part.bin_of(o.ys[i])];
  }
  jc.total = o.size() - burn_in;
  return jc;
}

EmpiricalMeasures empirical_measures(const CoupledOrbit& o, std::size_t n_bins,
                                     std::size_t burn_in) {
  const JointCounts jc = joint_counts(o, n_bins, burn_in);
  const auto total = static_cast<double>(jc.total);
  std::vector<double> cells(jc.cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<double>(jc.cells[c]) / total;
  const auto xc = jc.x_counts();
  const auto yc = jc.y_counts();
  return {DensityOnI::from_counts(xc), DensityOnI::from_counts(yc),
          Hist2D::normalized(n_bins, std::move(cells))};
}

DensityOnI conditional_slave(const CoupledOrbit& o, std::size_t n_bins, std::size_t x_bin,
                             std::size_t min_visits) {
  const Partition part(n_bins);
  if (x_bin >= n_bins) throw DomainError("x-bin index out of range");
  std::vector<std::uint64_t> counts(n_bins, 0);
  std::size_t visits = 0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (part.bin_of(o.xs[i]) != x_bin) continue;
    ++counts[part.bin_of(o.ys[i])];
    ++visits;
  }
  if (visits < min_visits || visits == 0) {
    throw InsufficientVisitsError("x-bin " + std::to_string(x_bin) + " has " +
                                      std::to_string(visits) + " visits, need " +
                                      std::to_string(min_visits),
                                  visits);
  }
  return DensityOnI::from_counts(counts);
}

namespace {

double log_term(double c2, double y, double clip, std::size_t& clipped) {
  const double d = std::abs(4.0 * c2 * y);
  if (d < clip) {
    ++clipped;
    return std::log(clip);
  }
  return std::log(d);
}

}  // namespace

LyapunovEstimate transverse_lyapunov(const CoupledOrbit& o, double clip) {
  if (o.ys.empty()) throw DomainError("empty orbit");
  if (!(clip > 0.0)) throw DomainError("clip must be positive");
  std::size_t clipped = 0;
  double sum = 0.0;
  for (double y : o.ys) sum += log_term(o.t2.c(), y, clip, clipped);
  return {sum / static_cast<double>(o.ys.size()), clipped};
}

std::vector<LyapunovTracePoint> transverse_lyapunov_trace(const CoupledOrbit& o,
                                                          std::size_t stride, double clip) {
  if (o.ys.empty()) throw DomainError("empty orbit");
  if (stride == 0) throw DomainError("trace stride must be positive");
  if (!(clip > 0.0)) throw DomainError("clip must be positive");
  std::vector<LyapunovTracePoint> trace;
  std::size_t clipped = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < o.ys.size(); ++i) {
    sum += log_term(o.t2.c(), o.ys[i], clip, clipped);
    const std::size_t n = i + 1;
    if (n % stride == 0 || n == o.ys.size()) {
      trace.push_back({n, sum / static_cast<double>(n), clipped});
    }
  }
  return trace;
}

double sync_error(const CoupledOrbit& o, std::size_t tail) {
  if (tail == 0 || tail > o.size()) {
    throw DomainError("tail must be in [1, orbit length]");
  }
  double s = 0.0;
  for (std::size_t i = o.size() - tail; i < o.size(); ++i) s += std::abs(o.xs[i] - o.ys[i]);
  return s / static_cast<double>(tail);
}

}  // namespace mslab
