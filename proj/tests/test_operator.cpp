#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "mslab/certificates.hpp"
#include "mslab/dynamics.hpp"
#include "mslab/error.hpp"
#include "mslab/ulam.hpp"
#include "support.hpp"

using namespace mslab;

namespace {

// Exact integral of z -> p_k(y, z) over [zl, zh]: the kernel is constant
// between the images of h's bin edges, so a midpoint rule on those pieces is exact.
double kernel_integral(const QuadraticMap& t2, const DensityOnI& h, double k, double y,
                       double zl, double zh) {
  const double shift = (1.0 - k) * t2(y);
  std::vector<double> cuts = {zl, zh};
  const Partition p(h.n_bins());
  for (std::size_t j = 0; j <= h.n_bins(); ++j) {
    const double e = shift + k * (j == h.n_bins() ? 1.0 : p.lower(j));
    if (e > zl && e < zh) cuts.push_back(e);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    total += kernel_density(t2, h, k, y, mid) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("kernel density basics") {
  const auto& h = testing::h09();
  const QuadraticMap t2(0.7);
  for (double z : {-0.9, -0.3, 0.0, 0.45, 0.88}) {
    CHECK(kernel_density(t2, h, 1.0, -0.4, z) == h.value_at(z));
    CHECK(kernel_density(t2, h, 1.0, 0.9, z) == h.value_at(z));
  }
  // (z - (1-k) T2(y)) / k far outside I.
  CHECK(kernel_density(t2, h, 0.1, 0.0, -0.99) == 0.0);
  CHECK_THROWS_AS(kernel_density(t2, h, 0.0, 0.0, 0.0), DomainError);

  Rng rng = make_rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const double k = testing::uniform_in(rng, 0.05, 1.0);
    const double y = testing::uniform_in(rng, -1.0, 1.0);
    CHECK(kernel_integral(t2, h, k, y, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("Ulam entries integrate the kernel over the target bin") {
  const auto& h = testing::h09();
  const QuadraticMap t2(0.7);
  const double k = 0.4;
  const std::size_t n = 32;
  const auto op = build_ulam(t2, h, k, n, 1);
  const Partition p(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double want = kernel_integral(t2, h, k, p.center(i), p.lower(j), p.upper(j));
      worst = std::max(worst, std::abs(op.matrix().at(i, j) - want));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("Ulam rows agree with sampled transitions") {
  const auto& h = testing::h09();
  const QuadraticMap t2(0.9);
  const double k = 0.5;
  const auto op = build_ulam(t2, h, k, 64, 1);
  const Partition p(64);
  const HistogramSampler sample(h);
  Rng rng = make_rng(31);
  for (std::size_t i : {5u, 30u, 50u}) {
    std::vector<double> z(1000000);
    for (double& v : z) v = (1 - k) * t2(p.center(i)) + k * sample(rng);
    const auto emp = DensityOnI::histogram(z, 64);
    CHECK(l1_distance(emp.weights(), op.matrix().dense_row(i)) <= 0.01);
  }
}

TEST_CASE("Ulam operators are row stochastic") {
  const auto& h = testing::h09();
  for (double c2 : {0.3, 0.5, 0.9, 1.0}) {
    for (double k : {0.01, 0.2, 0.5, 0.8, 1.0}) {
      const auto op = build_ulam(QuadraticMap(c2), h, k, 128);
      CHECK(op.matrix().max_row_defect() <= 1e-10);
      const auto out = op.apply(DensityOnI::uniform(128));
      double total = 0.0;
      for (double w : out.weights()) total += w;
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(build_ulam(QuadraticMap(0.5), h, 0.5, 8), DomainError);
  CHECK_THROWS_AS(build_ulam(QuadraticMap(0.5), h, 0.0, 64), DomainError);
}

TEST_CASE("k = 1 collapses every row onto h") {
  const auto& h = testing::h09();
  const auto op = build_ulam(QuadraticMap(0.5), h, 1.0, 1024);
  for (std::size_t i = 0; i < 1024; i += 37) {
    CHECK(l1_distance(op.matrix().dense_row(i), h.weights()) <= 1e-12);
  }
  Rng rng = make_rng(2);
  const auto f0 = testing::random_density(rng, 1024);
  const auto res = stationary_density(op, f0);
  CHECK(res.iterations <= 1);
  CHECK(l1_distance(res.density.weights(), h.weights()) <= 1e-10);
  CHECK(l1_distance(op.apply(f0).weights(), h.weights()) <= 1e-10);
}

TEST_CASE("stationary density is unique and a fixed start does not move") {
  const auto& h = testing::h09();
  const auto op = build_ulam(QuadraticMap(0.5), h, 0.5, 1024);
  const auto g = stationary_density(op, DensityOnI::uniform(1024), 100000, 1e-13).density;
  Rng rng = make_rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = stationary_density(op, testing::random_density(rng, 1024), 100000, 1e-13).density;
    CHECK(l1_distance(f.weights(), g.weights()) <= 1e-8);
  }
  const auto pm = stationary_density(op, DensityOnI::point_mass(1024, 3), 100000, 1e-13).density;
  CHECK(l1_distance(pm.weights(), g.weights()) <= 1e-8);

  const auto again = stationary_density(op, g, 100000, 1e-10);
  CHECK(again.iterations == 0);
  CHECK(again.last_change < 1e-10);
}

TEST_CASE("stationary density reports non-convergence") {
  const auto op = build_ulam(QuadraticMap(0.9), testing::h09(), 0.2, 256);
  try {
    stationary_density(op, DensityOnI::point_mass(256, 10), 3, 1e-10);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_iterate().size() == 256);
    CHECK(e.last_change() >= 1e-10);
  }
  CHECK_THROWS_AS(stationary_density(op, DensityOnI::uniform(128)), ShapeError);
}

TEST_CASE("empirical rate: geometric, start independent, and dominated by the certificate") {
  const auto& h = testing::h09();
  const QuadraticMap t2(0.5);
  const auto op = build_ulam(t2, h, 0.5, 1024);
  const auto g = stationary_density(op, DensityOnI::uniform(1024), 100000, 1e-14).density;
  Rng rng = make_rng(5);
  const auto a = empirical_rate(op, testing::random_density(rng, 1024, 1), g, 5000);
  const auto b = empirical_rate(op, DensityOnI::point_mass(1024, 800), g, 5000);
  CHECK(a.rate > 0.0);
  CHECK(a.rate < 1.0);
  CHECK(std::abs(a.rate - b.rate) <= 0.05);
  CHECK(a.r_squared >= 0.99);
  CHECK(a.window_last >= a.window_first + 2);
  CHECK(a.distances.front() > a.distances.back());
  const auto cert = minorization_certificate(t2, h, 0.5);
  CHECK(a.rate < cert.rate_bound);

  const auto full = build_ulam(t2, h, 1.0, 1024);
  try {
    empirical_rate(full, DensityOnI::uniform(1024), project(h, 1024), 100);
    FAIL("expected DiagnosticError");
  } catch (const DiagnosticError& e) {
    CHECK(e.kind() == DiagnosticError::Kind::TooFast);
  }
}

TEST_CASE("random densities are reproducible and respect the requested support") {
  const auto a = random_density(64, 9, 1, 63);
  const auto b = random_density(64, 9, 1, 63);
  CHECK(l1_distance(a.weights(), b.weights()) == 0.0);
  CHECK(a.weight(0) == 0.0);
  CHECK(a.weight(63) == 0.0);
  CHECK(finite_lyapunov_moment(a));
  CHECK_THROWS_AS(random_density(64, 9, 5, 5), DomainError);
}

TEST_CASE("dump layout round trips") {
  const auto op = build_ulam(QuadraticMap(0.9), testing::h09(), 0.3, 16);
  std::stringstream ss;
  write_ulam(ss, op, {"note"});
  std::string first;
  std::getline(ss, first);
  CHECK(std::regex_match(first, std::regex("# ulam v1 n_bins=16 k=\\S+ c2=\\S+ h=[0-9a-f]{16}")));
  ss.seekg(0);
  const auto back = read_ulam(ss);
  CHECK(back.n_bins() == 16);
  CHECK(back.k() == op.k());
  CHECK(back.c2() == op.c2());
  CHECK(back.h_hash() == op.h_hash());
  for (std::size_t i = 0; i < 16; ++i) CHECK(back.matrix().dense_row(i) == op.matrix().dense_row(i));

  std::stringstream bad("not a dump\n");
  CHECK_THROWS_AS(read_ulam(bad), DomainError);
  std::stringstream short_rows("# ulam v1 n_bins=16 k=0.5 c2=0.5 h=0000000000000000\n1,0\n");
  CHECK_THROWS(read_ulam(short_rows));
}

}
