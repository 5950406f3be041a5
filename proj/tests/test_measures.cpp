#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mslab/density.hpp"
#include "mslab/error.hpp"
#include "mslab/measures.hpp"
#include "support.hpp"

using namespace mslab;
using std::numbers::pi;

namespace {

DensityOnI left_half_uniform(std::size_t n) {
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n / 2; ++j) w[j] = 1.0;
  return DensityOnI::normalized(w);
}

// Direct complex-exponential evaluation of the characteristic-function gap.
double brute_gap(const Hist2D& j, const DensityOnI& mu, const std::vector<Frequency>& grid) {
  const Partition p(j.n_bins());
  double worst = 0.0;
  for (const auto& [t1, t2] : grid) {
    std::complex<double> a = 0.0, b = 0.0;
    for (std::size_t r = 0; r < j.n_bins(); ++r) {
      for (std::size_t c = 0; c < j.n_bins(); ++c) {
        a += j.at(r, c) * std::exp(std::complex<double>(0, t1 * p.center(r) + t2 * p.center(c)));
      }
      b += mu.weight(r) * std::exp(std::complex<double>(0, (t1 + t2) * p.center(r)));
    }
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("partition bins are left-closed with the last bin closed") {
  const Partition p(4);
  CHECK(p.bin_of(-1.0) == 0);
  CHECK(p.bin_of(-0.5) == 1);
  CHECK(p.bin_of(0.0) == 2);
  CHECK(p.bin_of(1.0) == 3);
  CHECK_THROWS_AS(p.bin_of(1.0000001), DomainError);
}

TEST_CASE("density validation and value convention") {
  CHECK_THROWS_AS(DensityOnI({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(DensityOnI({1.1, -0.1}), DomainError);
  const DensityOnI d({0.25, 0.75});
  CHECK(d.density(1) == doctest::Approx(0.75 * 2 / 2));
  CHECK(d.cdf(-1.0) == 0.0);
  CHECK(d.cdf(0.0) == doctest::Approx(0.25));
  CHECK(d.cdf(0.5) == doctest::Approx(0.625));
  CHECK(d.cdf(2.0) == 1.0);
}

TEST_CASE("projection keeps mass and matches the CDF") {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = testing::random_density(rng, 96);
    for (std::size_t n : {48u, 32u, 7u, 200u}) {
      const auto p = project(d, n);
      const Partition part(n);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(p.weight(j) == doctest::Approx(d.cdf(part.upper(j)) - d.cdf(part.lower(j))).epsilon(1e-9).scale(1));
      }
    }
  }
}

TEST_CASE("tv_distance examples") {
  const auto u = DensityOnI::uniform(8);
  CHECK(tv_distance(u, u) == 0.0);
  CHECK(tv_distance(DensityOnI::point_mass(8, 0), DensityOnI::point_mass(8, 1)) == 1.0);
  CHECK(tv_distance(left_half_uniform(8), u) == doctest::Approx(0.5));
  CHECK_THROWS_AS(tv_distance(u, DensityOnI::uniform(4)), ShapeError);
}

TEST_CASE("tv_distance is a metric and dominates W1 / 2") {
  Rng rng = make_rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    const auto a = testing::random_density(rng, n);
    const auto b = testing::random_density(rng, n);
    const auto c = testing::random_density(rng, n);
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-15);
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(a, b) > 0.0);
    CHECK(tv_distance(a, b) <= 1.0 + 1e-15);
    CHECK(w1_distance(a, b) <= 2.0 * tv_distance(a, b) + 1e-12);
  }
}

TEST_CASE("w1_distance examples") {
  const std::size_t n = 64;
  const double width = 2.0 / n;
  CHECK(w1_distance(DensityOnI::uniform(n), DensityOnI::uniform(n)) == 0.0);
  CHECK(std::abs(w1_distance(DensityOnI::point_mass(n, 0), DensityOnI::point_mass(n, n - 1)) - 2.0) <= width);
  const auto delta0 = DensityOnI::point_mass(n, Partition(n).bin_of(0.0));
  CHECK(std::abs(w1_distance(DensityOnI::uniform(n), delta0) - 0.5) <= width);
}

TEST_CASE("product and diagonal measures") {
  const std::size_t n = 8;
  const auto u = DensityOnI::uniform(n);
  const auto pu = product_measure(u, u);
  for (double w : pu.weights()) CHECK(w == doctest::Approx(1.0 / 64));

  const auto pp = product_measure(DensityOnI::point_mass(n, 3), DensityOnI::point_mass(n, 5));
  CHECK(pp.at(3, 5) == 1.0);

  Rng rng = make_rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_density(rng, n);
    const auto b = testing::random_density(rng, n);
    const auto p = product_measure(a, b);
    const auto d = diagonal_pushforward(a);
    double sp = 0, sd = 0;
    for (double w : p.weights()) sp += w;
    for (double w : d.weights()) sd += w;
    CHECK(std::abs(sp - 1.0) <= 1e-12);
    CHECK(std::abs(sd - 1.0) <= 1e-12);
    CHECK(l1_distance(p.marginal_x().weights(), a.weights()) <= 1e-15);
    CHECK(l1_distance(p.marginal_y().weights(), b.weights()) <= 1e-15);
    CHECK(l1_distance(d.marginal_x().weights(), a.weights()) == 0.0);
    CHECK(l1_distance(d.marginal_y().weights(), a.weights()) == 0.0);
    CHECK(mean_abs_diff(d) == 0.0);
  }

  const auto u2 = DensityOnI::uniform(2);
  CHECK(tv_distance(diagonal_pushforward(u2), product_measure(u2, u2)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(product_measure(u, u2), ShapeError);
}

TEST_CASE("mean_abs_diff examples") {
  const std::size_t n = 8;  // centers ... -0.25, 0.25 ...
  const Partition p(n);
  const auto a = DensityOnI::point_mass(n, p.bin_of(0.25));
  const auto b = DensityOnI::point_mass(n, p.bin_of(-0.25));
  CHECK(mean_abs_diff(product_measure(a, b)) == doctest::Approx(0.5));

  const std::size_t m = 200;
  const auto u = DensityOnI::uniform(m);
  CHECK(std::abs(mean_abs_diff(product_measure(u, u)) - 2.0 / 3.0) <= 2.0 / m);
}

TEST_CASE("characteristic-function gap agrees with direct summation") {
  const auto grid = default_frequency_grid();
  CHECK(grid.size() == 49);
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4 + rng() % 20;
    const auto a = testing::random_density(rng, n);
    const auto b = testing::random_density(rng, n);
    const auto j = product_measure(a, b);
    CHECK(char_function_gap(j, a, grid) == doctest::Approx(brute_gap(j, a, grid)).epsilon(1e-12).scale(1));
    const std::vector<Frequency> origin = {{0.0, 0.0}};
    CHECK(char_function_gap(j, b, origin) <= 1e-14);
  }
}

TEST_CASE("diagonal target has zero gap; uniform product at (pi, pi)") {
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 8 + rng() % 100;
    const auto mu = testing::random_density(rng, n);
    std::vector<Frequency> grid;
    for (int g = 0; g < 5; ++g) grid.push_back({testing::uniform_in(rng, -10, 10), testing::uniform_in(rng, -10, 10)});
    double tmax = 0;
    for (const auto& [t1, t2] : grid) tmax = std::max(tmax, std::abs(t1) + std::abs(t2));
    CHECK(char_function_gap(diagonal_pushforward(mu), mu, grid) <= 2.0 * tmax * (2.0 / n));
  }
  const auto u = DensityOnI::uniform(64);
  const std::vector<Frequency> pp = {{pi, pi}};
  const auto j = product_measure(u, u);
  CHECK(char_function_gap(j, u, pp) == doctest::Approx(brute_gap(j, u, pp)).scale(1).epsilon(1e-12));
  CHECK(char_function_gap(j, u, pp) <= 1e-12);
}

TEST_CASE("Hist2D validation") {
  CHECK_THROWS_AS(Hist2D(2, {0.5, 0.5, 0.0}), ShapeError);
  CHECK_THROWS_AS(Hist2D(2, {0.5, 0.6, 0.0, 0.0}), DomainError);
  const auto h = Hist2D::normalized(2, {1, 1, 0, 2});
  CHECK(h.at(1, 1) == 0.5);
  CHECK(h.marginal_x().weight(0) == 0.5);
  CHECK(h.marginal_y().weight(1) == 0.75);
}

}
