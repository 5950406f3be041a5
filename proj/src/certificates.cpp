#include "mslab/certificates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "mslab/dynamics.hpp"
#include "mslab/error.hpp"
#include "mslab/rng.hpp"

namespace mslab {
namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

void require_slave_parameter(double c2) {
  if (!(c2 > 0.0 && c2 < 1.0)) {
    throw DomainError("Lyapunov function needs c2 in (0,1), got " + std::to_string(c2));
  }
}

void require_open_coupling(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("coupling k=" + std::to_string(k) + " outside (0,1)");
  }
}

void require_interior_support(const DensityOnI& f, const char* what) {
  const std::size_t n = f.n_bins();
  if (f.weight(0) != 0.0 || f.weight(n - 1) != 0.0) {
    throw DomainError(std::string(what) +
                      " charges a bin touching +-1 where V_k is not integrable");
  }
}

// Mean of V_k(k x + shift) for x uniform on [lo, hi].
double bin_average_V(double c2, double k, double lo, double hi, double scale, double shift) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
    s += kGaussWeights[q] * lyapunov_V(c2, k, scale * (mid + half * kGaussNodes[q]) + shift);
  }
  return 0.5 * s;
}

}  // namespace

double lyapunov_V(double c2, double k, double x) {
  require_slave_parameter(c2);
  require_open_coupling(k);
  if (!(std::abs(x) < 1.0 - 1e-12)) {
    throw DomainError("V_k diverges at x=" + std::to_string(x));
  }
  const double a = std::pow(c2, 1.0 / k) * (1.0 - c2 * c2);
  return std::cosh(a * x / (1.0 - x * x));
}

double drift_gamma(double c2, double k) { return (1.0 - k) * std::cosh(std::pow(c2, 1.0 / k + 1.0)); }

double drift_constant(const DensityOnI& h, double c2, double k) {
  require_slave_parameter(c2);
  require_interior_support(h, "h");
  const Partition part(h.n_bins());
  double s = 0.0;
  for (std::size_t l = 0; l < h.n_bins(); ++l) {
    if (h.weight(l) == 0.0) continue;
    s += h.weight(l) * bin_average_V(c2, k, part.lower(l), part.upper(l), 1.0, 0.0);
  }
  return k * s;
}

double expected_V_after_step(const QuadraticMap& t2, const DensityOnI& h, double k, double y) {
  const double c2 = t2.c();
  const double shift = (1.0 - k) * t2.eval(y);
  const Partition part(h.n_bins());
  double s = 0.0;
  for (std::size_t l = 0; l < h.n_bins(); ++l) {
    if (h.weight(l) == 0.0) continue;
    s += h.weight(l) * bin_average_V(c2, k, part.lower(l), part.upper(l), k, shift);
  }
  return s;
}

bool DriftCertificate::valid() const {
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (!(residuals[i] <= rel_tol * scales[i])) return false;
  }
  return true;
}

double DriftCertificate::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

double DriftCertificate::max_relative_residual() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (std::isfinite(scales[i])) worst = std::max(worst, residuals[i] / scales[i]);
  }
  return worst;
}

std::vector<double> interior_grid(std::size_t n, double eps) {
  if (n < 2) throw DomainError("grid needs at least two points");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("grid margin must lie in (0,1)");
  std::vector<double> g(n);
  const double lo = -1.0 + eps;
  const double step = 2.0 * (1.0 - eps) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = 1.0 - eps;
  return g;
}

DriftCertificate drift_certificate(const QuadraticMap& t2, const DensityOnI& h, double k,
                                   const std::vector<double>& y_grid, double rel_tol) {
  const double c2 = t2.c();
  require_slave_parameter(c2);
  require_open_coupling(k);
  DriftCertificate cert{k, drift_gamma(c2, k), drift_constant(h, c2, k), rel_tol, y_grid, {}, {}};
  cert.residuals.reserve(y_grid.size());
  cert.scales.reserve(y_grid.size());
  for (double y : y_grid) {
    const double scale = cert.gamma * lyapunov_V(c2, k, y) + cert.K;
    cert.residuals.push_back(expected_V_after_step(t2, h, k, y) - scale);
    cert.scales.push_back(scale);
  }
  return cert;
}

Envelope max_rectangle_envelope(const DensityOnI& h, double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw DomainError("margin must lie in (0,1)");
  const std::size_t n = h.n_bins();
  // Largest rectangle in a histogram: each bin is the limiting height of the
  // widest run in which it is the minimum.
  std::vector<std::size_t> stack;
  double best_area = 0.0;
  std::size_t best_first = 0, best_last = 0;
  double best_height = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double cur = j < n ? h.density(j) : -1.0;
    while (!stack.empty() && h.density(stack.back()) >= cur) {
      const std::size_t top = stack.back();
      stack.pop_back();
      const std::size_t first = stack.empty() ? 0 : stack.back() + 1;
      const double height = h.density(top);
      const double area = height * static_cast<double>(j - first);
      if (area > best_area) {
        best_area = area;
        best_first = first;
        best_last = j - 1;
        best_height = height;
      }
    }
    if (j < n) stack.push_back(j);
  }
  const Partition part(n);
  return {(1.0 - margin) * best_height, part.lower(best_first), part.upper(best_last),
          best_first, best_last};
}

KStar k_star(double a0, double b0, double c2) {
  if (a0 > b0) throw DomainError("envelope support is empty");
  if (a0 > c2) {
    const double ratio = (1.0 - c2) / (a0 - c2);
    const double verbatim = std::max(ratio, 1.0);
    return {KStar::Branch::AboveC2, ratio, verbatim, std::min(verbatim, 1.0)};
  }
  if (b0 < -c2) {
    const double ratio = (1.0 - c2) / std::abs(b0 + c2);
    const double verbatim = std::max(ratio, 1.0);
    return {KStar::Branch::BelowMinusC2, ratio, verbatim, std::min(verbatim, 1.0)};
  }
  return {KStar::Branch::Straddles, 1.0, 1.0, 1.0};
}

double rate_bound(double alpha, double alpha_bar, double gamma, double K, double R) {
  const double b = alpha_bar / K;
  const double first = 1.0 - (alpha - alpha_bar);
  const double second = (2.0 + R * b * (gamma + 2.0 * K / R)) / (2.0 + R * b);
  return std::max(first, second);
}

MinorizationCertificate minorization_certificate(const QuadraticMap& t2, const DensityOnI& h,
                                                 double k, const MinorizationParams& params) {
  const double c2 = t2.c();
  require_slave_parameter(c2);
  require_open_coupling(k);
  if (!(params.alpha_bar_frac > 0.0 && params.alpha_bar_frac < 1.0)) {
    throw DomainError("alpha_bar_frac must lie in (0,1)");
  }
  if (!(params.R_frac > 1.0)) throw DomainError("R_frac must exceed 1");
  if (params.shift_grid < 2) throw DomainError("shift grid needs at least two points");

  MinorizationCertificate cert{};
  cert.k = k;
  cert.gamma = drift_gamma(c2, k);
  cert.K = drift_constant(h, c2, k);
  cert.envelope = max_rectangle_envelope(h, params.margin);
  cert.alpha = cert.envelope.mass();
  if (cert.alpha < 1e-6) {
    throw EnvelopeError("lower envelope of h has mass " + std::to_string(cert.alpha));
  }
  cert.k_star = k_star(cert.envelope.a0, cert.envelope.b0, c2);
  if (k >= cert.k_star.value) {
    throw OutOfRegimeError("k=" + std::to_string(k) + " is not below k_*=" +
                               std::to_string(cert.k_star.value),
                           cert.k_star.value);
  }

  const std::size_t n = h.n_bins();
  const Partition part(n);
  cert.psi0.assign(n, 0.0);
  for (std::size_t j = cert.envelope.first_bin; j <= cert.envelope.last_bin; ++j) {
    cert.psi0[j] = cert.envelope.height * part.width();
  }

  const double a0 = cert.envelope.a0, b0 = cert.envelope.b0;
  cert.nu_tilde_masses.assign(n, 0.0);
  cert.nu_tilde_mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < params.shift_grid; ++s) {
      const double w = -c2 + 2.0 * c2 * static_cast<double>(s) /
                                 static_cast<double>(params.shift_grid - 1);
      const double lo = std::max(a0, (part.lower(j) - (1.0 - k) * w) / k);
      const double hi = std::min(b0, (part.upper(j) - (1.0 - k) * w) / k);
      lowest = std::min(lowest, std::max(0.0, hi - lo));
      if (lowest == 0.0) break;
    }
    cert.nu_tilde_masses[j] = cert.envelope.height * lowest / cert.alpha;
    cert.nu_tilde_mass += cert.nu_tilde_masses[j];
  }
  if (cert.nu_tilde_mass > 0.0) cert.nu_tilde = DensityOnI::normalized(cert.nu_tilde_masses);

  const double R_min = 2.0 * cert.K / (1.0 - cert.gamma);
  cert.alpha_bar = params.alpha_bar_frac * cert.alpha;
  cert.R = params.R_frac * R_min;
  cert.rate_bound = rate_bound(cert.alpha, cert.alpha_bar, cert.gamma, cert.K, cert.R);

  cert.min_rate_bound = cert.rate_bound;
  cert.min_alpha_bar_frac = params.alpha_bar_frac;
  cert.min_R_frac = params.R_frac;
  for (int a = 1; a <= 99; ++a) {
    const double af = 0.01 * a;
    for (int r = 0; r < 100; ++r) {
      const double rf = 1.01 * std::pow(1e8 / 1.01, r / 99.0);
      const double bound = rate_bound(cert.alpha, af * cert.alpha, cert.gamma, cert.K, rf * R_min);
      if (bound < cert.min_rate_bound) {
        cert.min_rate_bound = bound;
        cert.min_alpha_bar_frac = af;
        cert.min_R_frac = rf;
      }
    }
  }
  return cert;
}

double weighted_tv(const DensityOnI& a, const DensityOnI& b, double c2, double k, double beta) {
  if (a.n_bins() != b.n_bins()) throw ShapeError("densities live on different partitions");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  require_interior_support(a, "first density");
  require_interior_support(b, "second density");
  const Partition part(a.n_bins());
  double s = 0.0;
  for (std::size_t j = 1; j + 1 < a.n_bins(); ++j) {
    const double diff = std::abs(a.weight(j) - b.weight(j));
    if (diff == 0.0) continue;
    s += (1.0 + beta * (lyapunov_V(c2, k, part.center(j)) - 1.0)) * diff;
  }
  return s;
}

bool finite_lyapunov_moment(const DensityOnI& f) {
  return f.weight(0) == 0.0 && f.weight(f.n_bins() - 1) == 0.0;
}

DriftMcReport drift_mc_check(const QuadraticMap& t2, const DensityOnI& h, double k, double y0,
                             std::size_t n_max, std::size_t reps, std::uint64_t seed) {
  const double c2 = t2.c();
  require_slave_parameter(c2);
  require_open_coupling(k);
  if (reps < 10000) throw DomainError("drift Monte Carlo needs at least 1e4 replicas");
  const double v0 = lyapunov_V(c2, k, y0);

  DriftMcReport report{drift_gamma(c2, k), drift_constant(h, c2, k), {}, true};
  const HistogramSampler sample(h);
  Rng rng = make_rng(seed);
  std::vector<double> ys(reps, y0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) {
      for (double& y : ys) y = (1.0 - k) * t2(y) + k * sample(rng);
    }
    double sum = 0.0, sum_sq = 0.0;
    for (double y : ys) {
      const double v = lyapunov_V(c2, k, y);
      sum += v;
      sum_sq += v * v;
    }
    const auto m = static_cast<double>(reps);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    const double se = std::sqrt(var / m);
    const double g = report.gamma;
    const double geometric = g == 1.0 ? static_cast<double>(n + 1)
                                      : (1.0 - std::pow(g, static_cast<double>(n + 1))) / (1.0 - g);
    const double bound = report.K * geometric + std::pow(g, static_cast<double>(n)) * v0;
    const bool pass = mean <= bound + 3.0 * se;
    report.steps.push_back({n, mean, se, bound, pass});
    report.pass = report.pass && pass;
  }
  return report;
}

}  // namespace mslab
