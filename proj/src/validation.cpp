#include "forgetcurate/validation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "forgetcurate/errors.hpp"

namespace forgetcurate::validation {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    fail(ErrorKind::size_mismatch, "pearson inputs must have equal length");
  if (x.size() < 2)
    fail(ErrorKind::size_mismatch, "pearson needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0)
    fail(ErrorKind::degenerate_variance, "pearson is undefined for constant input");
  const double r = cov / std::sqrt(var_x * var_y);
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> substituted_counts(const SeedRun& run, int inf_substitute) {
  std::vector<const events::ForgettingProfile*> order;
  order.reserve(run.profiles.size());
  for (const auto& p : run.profiles) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const events::ForgettingProfile* a, const events::ForgettingProfile* b) {
              return a->example_id < b->example_id;
            });
  std::vector<double> counts;
  counts.reserve(order.size());
  for (const auto* p : order)
    counts.push_back(static_cast<double>(p->forgetting_or(inf_substitute)));
  return counts;
}

std::vector<double> cross_seed_stdev(std::span<const SeedRun> runs, int inf_substitute) {
  if (runs.size() < 2)
    fail(ErrorKind::size_mismatch, "cross-seed stdev needs at least 2 runs");

  auto sorted_ids = [](const SeedRun& run) {
    std::vector<std::int64_t> ids;
    ids.reserve(run.profiles.size());
    for (const auto& p : run.profiles) ids.push_back(p.example_id);
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  const std::vector<std::int64_t> reference = sorted_ids(runs.front());
  for (const auto& run : runs.subspan(1)) {
    if (sorted_ids(run) != reference)
      fail(ErrorKind::id_mismatch, "seed runs must cover the identical id set");
  }

  std::vector<std::vector<double>> counts;
  counts.reserve(runs.size());
  for (const auto& run : runs) counts.push_back(substituted_counts(run, inf_substitute));

  const double m = static_cast<double>(runs.size());
  std::vector<double> stdev(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    double mean = 0.0;
    for (const auto& c : counts) mean += c[i];
    mean /= m;
    double ss = 0.0;
    for (const auto& c : counts) {
      const double d = c[i] - mean;
      ss += d * d;
    }
    stdev[i] = std::sqrt(ss / (m - 1.0));
  }
  return stdev;
}

double removal_overlap(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.empty() || b.empty()) fail(ErrorKind::empty_set, "overlap of an empty set");
  if (a.size() != b.size())
    fail(ErrorKind::size_mismatch, "overlap expects equally sized sets");
  std::unordered_set<std::int64_t> set_a(a.begin(), a.end());
  std::size_t shared = 0;
  for (std::int64_t id : b) shared += set_a.count(id);
  return static_cast<double>(shared) / static_cast<double>(a.size());
}

namespace {

double log_choose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

void check_hypergeom_params(long long population, long long labeled, long long draws) {
  if (population < 0 || labeled < 0 || draws < 0 || labeled > population ||
      draws > population)
    fail(ErrorKind::parameter_error,
         "hypergeometric needs 0 <= K <= N and 0 <= m <= N");
}

}  // namespace

double hypergeom_pmf(long long population, long long labeled, long long draws,
                     long long labeled_drawn) {
  check_hypergeom_params(population, labeled, draws);
  const long long lo = std::max(0LL, draws - (population - labeled));
  const long long hi = std::min(draws, labeled);
  if (labeled_drawn < lo || labeled_drawn > hi) return 0.0;
  const double log_p = log_choose(labeled, labeled_drawn) +
                       log_choose(population - labeled, draws - labeled_drawn) -
                       log_choose(population, draws);
  return std::exp(log_p);
}

HypergeomExpectation hypergeom_expected_overlap(long long population, long long labeled,
                                                long long draws) {
  check_hypergeom_params(population, labeled, draws);
  if (population == 0)
    fail(ErrorKind::parameter_error, "population must be positive");
  HypergeomExpectation e;
  e.expected_fraction = static_cast<double>(labeled) / static_cast<double>(population);
  e.expected_count = static_cast<double>(draws) * e.expected_fraction;
  return e;
}

}  // namespace forgetcurate::validation
