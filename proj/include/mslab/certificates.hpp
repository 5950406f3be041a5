#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mslab/density.hpp"
#include "mslab/maps.hpp"

namespace mslab {

// Lyapunov function of the chain,
//   V_k(x) = cosh(c2^{1/k} (1 - c2^2) x / (1 - x^2)),  |x| < 1.
// DomainError for |x| >= 1 - 1e-12.
double lyapunov_V(double c2, double k, double x);

// gamma_k = (1 - k) cosh(c2^{1/k + 1}).
double drift_gamma(double c2, double k);

// K_k = k * integral of h V_k, h piecewise constant (Gauss-Legendre inside
// each bin). DomainError when h charges a bin touching +-1.
double drift_constant(const DensityOnI& h, double c2, double k);

// integral of p_k(y, z) V_k(z) dz = integral of h(x) V_k(k x + (1 - k) T2(y)) dx.
double expected_V_after_step(const QuadraticMap& t2, const DensityOnI& h, double k, double y);

struct DriftCertificate {
  double k;
  double gamma;
  double K;
  double rel_tol;
  std::vector<double> y_grid;
  // LHS - (gamma V(y) + K) at each grid point.
  std::vector<double> residuals;
  // gamma V(y) + K at each grid point; residual tolerance is rel_tol * scale.
  std::vector<double> scales;

  bool valid() const;
  double max_residual() const;
  double max_relative_residual() const;
};

inline constexpr double kDriftRelTol = 1e-6;

// y_grid points equispaced in [-1 + eps, 1 - eps].
std::vector<double> interior_grid(std::size_t n, double eps);

DriftCertificate drift_certificate(const QuadraticMap& t2, const DensityOnI& h, double k,
                                   const std::vector<double>& y_grid,
                                   double rel_tol = kDriftRelTol);

// Lower envelope psi0 = height * 1_[a0, b0] under the histogram of h.
struct Envelope {
  double height;  // density value
  double a0;
  double b0;
  std::size_t first_bin;
  std::size_t last_bin;  // inclusive
  double mass() const noexcept { return height * (b0 - a0); }
};

// Largest rectangle under h's density histogram, scaled by (1 - margin).
Envelope max_rectangle_envelope(const DensityOnI& h, double margin);

// Case table for the largest coupling covered by the minorization.
struct KStar {
  enum class Branch { AboveC2, BelowMinusC2, Straddles };
  Branch branch;
  double ratio;      // (1 - c2) / (a0 - c2) or (1 - c2) / |b0 + c2|; 1 in the third case
  double verbatim;   // ratio v 1 as tabulated
  double value;      // clamped to (0, 1]
};

KStar k_star(double a0, double b0, double c2);

// [1 - (alpha - alpha_bar)] v [(2 + R b (gamma + 2K/R)) / (2 + R b)], b = alpha_bar / K.
double rate_bound(double alpha, double alpha_bar, double gamma, double K, double R);

struct MinorizationCertificate {
  double k;
  double gamma;
  double K;
  Envelope envelope;
  std::vector<double> psi0;  // sub-probability masses per bin of h's partition
  double alpha;              // mass of psi0
  KStar k_star;
  // Pointwise minimum over the shift grid, per bin; unnormalized, total mass
  // nu_tilde_mass. nu_tilde is the renormalized version when that mass is
  // positive.
  std::vector<double> nu_tilde_masses;
  double nu_tilde_mass;
  std::optional<DensityOnI> nu_tilde;
  double R;
  double alpha_bar;
  double rate_bound;
  // Smallest bound over a grid of (alpha_bar / alpha, R / R_min).
  double min_rate_bound;
  double min_alpha_bar_frac;
  double min_R_frac;
};

struct MinorizationParams {
  double margin = 0.05;
  double alpha_bar_frac = 0.5;
  double R_frac = 2.0;
  std::size_t shift_grid = 1024;
};

// OutOfRegimeError when k >= k_*; EnvelopeError when alpha < 1e-6.
MinorizationCertificate minorization_certificate(const QuadraticMap& t2, const DensityOnI& h,
                                                 double k, const MinorizationParams& params = {});

// d_beta(a, b) = sum over bins of [1 + beta (V_k(center) - 1)] |a - b|.
// DomainError if either density charges a boundary bin.
double weighted_tv(const DensityOnI& a, const DensityOnI& b, double c2, double k, double beta);

// Whether integral f V_k is finite: f must vanish on the two boundary bins.
bool finite_lyapunov_moment(const DensityOnI& f);

struct DriftMcStep {
  std::size_t n;
  double mean;
  double standard_error;
  double bound;
  bool pass;
};

struct DriftMcReport {
  double gamma;
  double K;
  std::vector<DriftMcStep> steps;  // n = 0 .. n_max
  bool pass;
};

// Monte Carlo check of E[V_k(Y_n) | Y_0 = y0] <= K (1 - gamma^{n+1}) / (1 - gamma)
// + gamma^n V_k(y0) for n <= n_max; a step passes when mean <= bound + 3 SE.
DriftMcReport drift_mc_check(const QuadraticMap& t2, const DensityOnI& h, double k, double y0,
                             std::size_t n_max, std::size_t reps, std::uint64_t seed);

}  // namespace mslab
