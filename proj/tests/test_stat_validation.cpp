#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/rng.hpp"
#include "forgetcurate/validation.hpp"

using namespace forgetcurate;
using namespace forgetcurate::validation;
using forgetcurate::events::ForgettingProfile;

namespace {

ForgettingProfile profile(std::int64_t id, int forgets, bool learnt = true) {
  ForgettingProfile p;
  p.example_id = id;
  p.learnt_ever = learnt;
  p.n_forgetting = learnt ? forgets : 0;
  return p;
}

// covariance oracle evaluated with the textbook formula
double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace

TEST_CASE("pearson endpoints and oracle agreement") {
  std::vector<double> x = {1, 2, 3, 4};
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> neg = {-1, -2, -3, -4};
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));

  std::vector<double> a = {1, 2, 3};
  std::vector<double> b = {2, 4, 7};
  CHECK(pearson(a, b) == doctest::Approx(oracle_pearson(a, b)).epsilon(1e-12));

  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> u(20), v(20);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = rng.unit();
      v[i] = rng.unit();
    }
    CHECK(pearson(u, v) == doctest::Approx(oracle_pearson(u, v)).epsilon(1e-10));
  }
}

TEST_CASE("pearson is invariant under positive affine maps") {
  Rng rng(7);
  std::vector<double> x(50), y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.unit() * 10;
    y[i] = rng.unit() * 10;
  }
  const double r = pearson(x, y);
  std::vector<double> mapped = x;
  for (double& v : mapped) v = 3.5 * v + 2.0;
  CHECK(std::abs(pearson(mapped, y) - r) < 1e-12);
}

TEST_CASE("pearson rejects degenerate input") {
  std::vector<double> constant = {2, 2, 2};
  std::vector<double> varying = {1, 2, 3};
  CHECK_THROWS_AS(pearson(constant, varying), Error);
  CHECK_THROWS_AS(pearson(varying, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST_CASE("cross-seed stdev substitutes infinity and matches arithmetic") {
  std::vector<SeedRun> runs(3);
  runs[0] = {10, {profile(0, 0), profile(1, 2)}};
  runs[1] = {20, {profile(0, 0), profile(1, 2)}};
  runs[2] = {42, {profile(0, 0, /*learnt=*/false), profile(1, 2)}};

  const std::vector<double> stdev = cross_seed_stdev(runs, 50);
  REQUIRE(stdev.size() == 2);
  // example 0: counts (0, 0, 50); sample stdev = sqrt((2*(50/3)^2 + (100/3)^2)/2)
  const double mean = 50.0 / 3.0;
  const double expected = std::sqrt(
      (2.0 * mean * mean + (50.0 - mean) * (50.0 - mean)) / 2.0);
  CHECK(stdev[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(stdev[1] == 0.0);
}

TEST_CASE("cross-seed stdev of always-never-learnt examples is zero") {
  std::vector<SeedRun> runs(2);
  runs[0] = {1, {profile(0, 0, false)}};
  runs[1] = {2, {profile(0, 0, false)}};
  CHECK(cross_seed_stdev(runs, 50)[0] == 0.0);
}

TEST_CASE("cross-seed stdev demands aligned ids") {
  std::vector<SeedRun> runs(2);
  runs[0] = {1, {profile(0, 1), profile(1, 1)}};
  runs[1] = {2, {profile(0, 1), profile(2, 1)}};
  CHECK_THROWS_AS(cross_seed_stdev(runs, 50), Error);
}

TEST_CASE("removal overlap arithmetic") {
  std::vector<std::int64_t> a = {1, 2, 3, 4};
  std::vector<std::int64_t> b = {2, 3, 4, 9};
  CHECK(removal_overlap(a, a) == 1.0);
  CHECK(removal_overlap(a, b) == doctest::Approx(0.75));
  CHECK(removal_overlap(b, a) == removal_overlap(a, b));  // symmetry at equal size
  std::vector<std::int64_t> c = {7, 8, 9, 10};
  CHECK(removal_overlap(a, c) == doctest::Approx(0.25));
  std::vector<std::int64_t> d = {70, 80, 90, 100};
  CHECK(removal_overlap(a, d) == 0.0);

  CHECK_THROWS_AS(removal_overlap(a, std::vector<std::int64_t>{1}), Error);
  CHECK_THROWS_AS(removal_overlap({}, {}), Error);
}

TEST_CASE("hypergeometric pmf against exhaustive enumeration") {
  // N=10, K=5, m=5: enumerate all 5-subsets of 10 elements
  int total = 0;
  std::vector<int> all_labeled_count(6, 0);
  for (int mask = 0; mask < 1024; ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != 5) continue;
    ++total;
    const int labeled = __builtin_popcount(static_cast<unsigned>(mask) & 0x1Fu);
    ++all_labeled_count[static_cast<std::size_t>(labeled)];
  }
  CHECK(total == 252);
  for (int x = 0; x <= 5; ++x) {
    const double expected =
        static_cast<double>(all_labeled_count[static_cast<std::size_t>(x)]) / 252.0;
    CHECK(hypergeom_pmf(10, 5, 5, x) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(hypergeom_pmf(10, 5, 5, 5) == doctest::Approx(1.0 / 252.0).epsilon(1e-12));
}

TEST_CASE("pmf handles support edges and bad parameters") {
  CHECK(hypergeom_pmf(10, 5, 5, 6) == 0.0);
  CHECK(hypergeom_pmf(10, 5, 5, -1) == 0.0);
  CHECK(hypergeom_pmf(10, 8, 5, 1) == 0.0);  // below max(0, m-(N-K)) = 3
  CHECK_THROWS_AS(hypergeom_pmf(10, 11, 5, 1), Error);
  CHECK_THROWS_AS(hypergeom_pmf(10, 5, 11, 1), Error);
  CHECK_THROWS_AS(hypergeom_pmf(-1, 0, 0, 0), Error);
}

TEST_CASE("pmf sums to one over its support") {
  double total = 0.0;
  for (int x = 0; x <= 6; ++x) total += hypergeom_pmf(20, 7, 6, x);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  for (long long n : {1, 5, 12, 25}) {
    for (long long k = 0; k <= n; ++k) {
      for (long long m = 0; m <= n; ++m) {
        double s = 0.0;
        for (long long x = 0; x <= m; ++x) s += hypergeom_pmf(n, k, m, x);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("expected overlap matches linearity and monte carlo") {
  const HypergeomExpectation e = hypergeom_expected_overlap(100, 25, 25);
  CHECK(e.expected_count == doctest::Approx(6.25));
  CHECK(e.expected_fraction == doctest::Approx(0.25));
  CHECK(hypergeom_expected_overlap(40, 40, 13).expected_fraction == 1.0);

  // Monte Carlo: draw m of N without replacement, count labeled
  const long long population = 1000, labeled = 250, draws = 200;
  const int trials = 100000;
  Rng rng(909);
  std::vector<std::int64_t> ids(population);
  for (long long i = 0; i < population; ++i) ids[static_cast<std::size_t>(i)] = i;
  double mean = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto sample =
        rng.sample_without_replacement(ids, static_cast<std::size_t>(draws));
    int count = 0;
    for (std::int64_t id : sample) count += id < labeled ? 1 : 0;
    mean += count;
  }
  mean /= trials;
  const double p = static_cast<double>(labeled) / static_cast<double>(population);
  const double variance = static_cast<double>(draws) * p * (1 - p) *
                          static_cast<double>(population - draws) /
                          static_cast<double>(population - 1);
  const double sigma = std::sqrt(variance / trials);
  CHECK(std::abs(mean - hypergeom_expected_overlap(population, labeled, draws)
                            .expected_count) < 3.0 * sigma);
}
