#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mslab/certificates.hpp"
#include "mslab/error.hpp"
#include "mslab/measures.hpp"
#include "mslab/ulam.hpp"
#include "support.hpp"

using namespace mslab;

namespace {

double cosh_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 30; ++n) {
    term *= x * x / ((2.0 * n - 1) * (2.0 * n));
    sum += term;
  }
  return sum;
}

// Midpoint rule on a fine grid inside each bin of h.
double integrate_against_h(const DensityOnI& h, double (*f)(double, const void*), const void* ctx) {
  const Partition p(h.n_bins());
  const int sub = 64;
  double total = 0.0;
  for (std::size_t j = 0; j < h.n_bins(); ++j) {
    if (h.weight(j) == 0.0) continue;
    const double w = p.width() / sub;
    for (int s = 0; s < sub; ++s) total += h.density(j) * f(p.lower(j) + (s + 0.5) * w, ctx) * w;
  }
  return total;
}

struct VArgs {
  double c2, k, shift;
};

double v_at(double x, const void* ctx) {
  const auto* a = static_cast<const VArgs*>(ctx);
  return lyapunov_V(a->c2, a->k, a->k * x + a->shift);
}

// Brute-force largest rectangle under a histogram, O(n^2).
double brute_rectangle(const DensityOnI& h) {
  double best = 0.0;
  for (std::size_t i = 0; i < h.n_bins(); ++i) {
    double lo = h.density(i);
    for (std::size_t j = i; j < h.n_bins(); ++j) {
      lo = std::min(lo, h.density(j));
      best = std::max(best, lo * h.bin_width() * static_cast<double>(j - i + 1));
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("Lyapunov function values") {
  CHECK(cosh_series(0.125) == doctest::Approx(1.0078226778257109).epsilon(1e-15));
  CHECK(lyapunov_V(0.5, 0.5, 0.5) == doctest::Approx(cosh_series(0.125)).epsilon(1e-14));
  Rng rng = make_rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const double c2 = testing::uniform_in(rng, 0.05, 0.99);
    const double k = testing::uniform_in(rng, 0.05, 0.99);
    const double x = testing::uniform_in(rng, -0.99, 0.99);
    CHECK(lyapunov_V(c2, k, 0.0) == 1.0);
    CHECK(lyapunov_V(c2, k, x) == lyapunov_V(c2, k, -x));
    CHECK(lyapunov_V(c2, k, x) >= 1.0);
  }
  CHECK_THROWS_AS(lyapunov_V(0.5, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(lyapunov_V(0.5, 0.5, -1.0 + 1e-13), DomainError);
  CHECK_THROWS_AS(lyapunov_V(1.0, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(lyapunov_V(0.5, 1.0, 0.0), DomainError);
}

TEST_CASE("drift rate formula and its limits") {
  CHECK(drift_gamma(0.5, 0.5) == doctest::Approx(0.5 * cosh_series(0.125)).epsilon(1e-15));
  CHECK(drift_gamma(0.5, 0.9) ==
        doctest::Approx(0.1 * std::cosh(std::pow(0.5, 1.0 / 0.9 + 1.0))).epsilon(1e-15));
  CHECK(drift_gamma(0.5, 0.999) < 0.01);
  CHECK(drift_gamma(0.5, 0.001) > 0.99);
  CHECK(drift_gamma(0.9, 0.001) > 0.99);
}

TEST_CASE("drift constant and one-step expectation match fine quadrature") {
  const auto& h = testing::h09();
  for (double c2 : {0.3, 0.9}) {
    for (double k : {0.2, 0.8}) {
      VArgs a{c2, k, 0.0};
      const double oracle = k * integrate_against_h(
                                    h, [](double x, const void* c) {
                                      const auto* v = static_cast<const VArgs*>(c);
                                      return lyapunov_V(v->c2, v->k, x);
                                    },
                                    &a);
      CHECK(drift_constant(h, c2, k) == doctest::Approx(oracle).epsilon(1e-6));
      for (double y : {-0.95, -0.2, 0.0, 0.6}) {
        VArgs s{c2, k, (1 - k) * QuadraticMap(c2)(y)};
        CHECK(expected_V_after_step(QuadraticMap(c2), h, k, y) ==
              doctest::Approx(integrate_against_h(h, v_at, &s)).epsilon(1e-6));
      }
    }
  }
  DensityRequest req;
  req.provider = DensityProvider::Analytic;
  const auto arcsine = invariant_density(QuadraticMap(1.0), req);
  CHECK_THROWS_AS(drift_constant(arcsine, 0.5, 0.5), DomainError);
}

TEST_CASE("drift certificate holds on the parameter grid") {
  const auto& h = testing::h09();
  const auto grid = interior_grid(200, 0.01);
  CHECK(grid.front() == doctest::Approx(-0.99));
  CHECK(grid.back() == doctest::Approx(0.99));
  for (double c2 : {0.3, 0.5, 0.9}) {
    for (double k : {0.2, 0.5, 0.8}) {
      const auto cert = drift_certificate(QuadraticMap(c2), h, k, grid);
      CHECK(cert.gamma == drift_gamma(c2, k));
      CHECK(cert.valid());
      CHECK(cert.gamma < 1.0);
      CHECK(cert.K >= 0.0);
    }
  }
  CHECK_THROWS_AS(drift_certificate(QuadraticMap(1.0), h, 0.5, grid), DomainError);
  CHECK_THROWS_AS(drift_certificate(QuadraticMap(0.5), h, 1.0, grid), DomainError);
}

TEST_CASE("envelope is the largest rectangle under h, shrunk by the margin") {
  // h uniform on [-0.5, 0.5]; margin 0.7 leaves height 0.3 and mass 0.3.
  std::vector<double> w(16, 0.0);
  for (std::size_t j = 4; j < 12; ++j) w[j] = 1.0 / 8;
  const DensityOnI box(w);
  const auto e = max_rectangle_envelope(box, 0.7);
  CHECK(e.a0 == doctest::Approx(-0.5));
  CHECK(e.b0 == doctest::Approx(0.5));
  CHECK(e.height == doctest::Approx(0.3));
  CHECK(e.mass() == doctest::Approx(0.3));

  Rng rng = make_rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 80;
    const auto h = testing::random_density(rng, n);
    const double margin = testing::uniform_in(rng, 0.01, 0.5);
    const auto env = max_rectangle_envelope(h, margin);
    CHECK(env.mass() == doctest::Approx((1 - margin) * brute_rectangle(h)).epsilon(1e-12));
    for (std::size_t j = env.first_bin; j <= env.last_bin; ++j) CHECK(env.height < h.density(j));
  }
}

TEST_CASE("k_star case table") {
  // a0 > c2: (1 - c2) / (a0 - c2) v 1.
  auto ks = k_star(0.5, 0.9, 0.3);
  CHECK(ks.branch == KStar::Branch::AboveC2);
  CHECK(ks.ratio == doctest::Approx(0.7 / 0.2));
  CHECK(ks.verbatim == doctest::Approx(3.5));
  CHECK(ks.value == 1.0);
  // b0 < -c2: (1 - c2) / |b0 + c2| v 1.
  ks = k_star(-0.9, -0.6, 0.3);
  CHECK(ks.branch == KStar::Branch::BelowMinusC2);
  CHECK(ks.ratio == doctest::Approx(0.7 / 0.3));
  CHECK(ks.value == 1.0);
  // Straddling envelope.
  ks = k_star(-0.56, 0.9, 0.9);
  CHECK(ks.branch == KStar::Branch::Straddles);
  CHECK(ks.value == 1.0);
  CHECK_THROWS_AS(k_star(0.5, 0.4, 0.3), DomainError);
}

TEST_CASE("rate bound formula") {
  const double alpha = 0.3, abar = 0.15, gamma = 0.6, K = 0.5, R = 10.0;
  const double b = abar / K;
  const double want = std::max(1 - (alpha - abar), (2 + R * b * (gamma + 2 * K / R)) / (2 + R * b));
  CHECK(rate_bound(alpha, abar, gamma, K, R) == doctest::Approx(want).epsilon(1e-15));
  // Nonincreasing in alpha with the rest fixed; inside (0, 1).
  double prev = 1.0;
  for (double a = 0.16; a < 1.0; a += 0.01) {
    const double r = rate_bound(a, abar, gamma, K, R);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    CHECK(r <= prev + 1e-15);
    prev = r;
  }
}

TEST_CASE("minorization certificate on the default model") {
  const auto& h = testing::h09();
  const auto cert = minorization_certificate(QuadraticMap(0.5), h, 0.5);
  CHECK(cert.alpha > 0.0);
  CHECK(cert.alpha < 1.0);
  CHECK(cert.alpha == doctest::Approx(cert.envelope.mass()));
  double psi_mass = 0.0;
  for (std::size_t j = 0; j < h.n_bins(); ++j) {
    CHECK(cert.psi0[j] <= h.weight(j));
    psi_mass += cert.psi0[j];
  }
  CHECK(psi_mass == doctest::Approx(cert.alpha).epsilon(1e-12));
  CHECK(cert.k_star.value == 1.0);
  CHECK(cert.R > 2 * cert.K / (1 - cert.gamma));
  CHECK(cert.alpha_bar == doctest::Approx(0.5 * cert.alpha));
  CHECK(cert.rate_bound == rate_bound(cert.alpha, cert.alpha_bar, cert.gamma, cert.K, cert.R));
  CHECK(cert.rate_bound > 0.0);
  CHECK(cert.rate_bound < 1.0);
  CHECK(cert.min_rate_bound <= cert.rate_bound);
  CHECK(cert.nu_tilde_mass >= 0.0);
  CHECK(cert.nu_tilde_mass <= 1.0 + 1e-12);
  if (cert.nu_tilde) CHECK(cert.nu_tilde_mass > 0.0);

  MinorizationParams thin;
  thin.margin = 0.999999999;
  CHECK_THROWS_AS(minorization_certificate(QuadraticMap(0.5), h, 0.5, thin), EnvelopeError);
}

TEST_CASE("weighted distance: limits and sandwich") {
  Rng rng = make_rng(88);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 16 + rng() % 200;
    const auto a = testing::random_density(rng, n, 1);
    const auto b = testing::random_density(rng, n, 1);
    const double c2 = testing::uniform_in(rng, 0.1, 0.95);
    const double k = testing::uniform_in(rng, 0.1, 0.95);
    const double beta = std::exp(testing::uniform_in(rng, -5, 5));
    const double d1 = weighted_tv(a, b, c2, k, 1.0);
    const double db = weighted_tv(a, b, c2, k, beta);
    CHECK(std::min(beta, 1.0) * d1 <= db + 1e-12);
    CHECK(db <= std::max(beta, 1.0) * d1 + 1e-12);
    CHECK(weighted_tv(a, a, c2, k, beta) == 0.0);
    CHECK(std::abs(weighted_tv(a, b, c2, k, 1e-12) / 2 - tv_distance(a, b)) <= 1e-9);
  }
  const auto edge = DensityOnI::point_mass(32, 0);
  CHECK_THROWS_AS(weighted_tv(edge, DensityOnI::point_mass(32, 5), 0.5, 0.5, 1.0), DomainError);
  CHECK_FALSE(finite_lyapunov_moment(edge));
}

TEST_CASE("Monte Carlo check of the iterated drift bound") {
  const auto& h = testing::h09();
  const auto rep = drift_mc_check(QuadraticMap(0.5), h, 0.5, 0.9, 50, 100000, 4);
  CHECK(rep.pass);
  REQUIRE(rep.steps.size() == 51);
  CHECK(rep.steps[0].mean == doctest::Approx(lyapunov_V(0.5, 0.5, 0.9)));
  CHECK(rep.steps[0].bound == doctest::Approx(rep.K + lyapunov_V(0.5, 0.5, 0.9)));

  const auto near_one = drift_mc_check(QuadraticMap(0.5), h, 0.99, 0.3, 5, 20000, 5);
  CHECK(near_one.pass);
  CHECK(near_one.steps.back().bound == doctest::Approx(near_one.K).epsilon(0.05));
  CHECK_THROWS_AS(drift_mc_check(QuadraticMap(0.5), h, 0.5, 0.9, 5, 100, 5), DomainError);
}

}
