#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forgetcurate/events.hpp"

namespace forgetcurate::validation {

// Substitute for the nominally infinite forgetting count of never-learnt
// examples when a numeric value is required.
inline constexpr int kDefaultInfSubstitute = 50;

// Sample Pearson correlation. Throws Error(size_mismatch) on unequal or
// too-short inputs and Error(degenerate_variance) when either input is
// constant.
double pearson(std::span<const double> x, std::span<const double> y);

// One training run's profiles, keyed by seed.
struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<events::ForgettingProfile> profiles;
};

// Per-example sample standard deviation of forgetting counts across runs,
// never-learnt counts replaced by inf_substitute first. Runs must cover the
// identical id set (Error(id_mismatch) otherwise); the output is ordered by
// ascending example id.
std::vector<double> cross_seed_stdev(std::span<const SeedRun> runs,
                                     int inf_substitute = kDefaultInfSubstitute);

// Forgetting counts of one run with the substitution applied, ascending by
// example id. Shared by cross_seed_stdev and the cross-seed Pearson table.
std::vector<double> substituted_counts(const SeedRun& run,
                                       int inf_substitute = kDefaultInfSubstitute);

// |a intersect b| / |a| for equally sized non-empty sets. Throws
// Error(size_mismatch) / Error(empty_set).
double removal_overlap(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

// Hypergeometric pmf P[X = x] for m draws from a population of N with K
// labeled, evaluated in log space. Out-of-support x yields 0; invalid
// parameters throw Error(parameter_error).
double hypergeom_pmf(long long population, long long labeled, long long draws,
                     long long labeled_drawn);

struct HypergeomExpectation {
  double expected_count = 0.0;
  double expected_fraction = 0.0;
};

// E[X] = m K / N and the labeled fraction K / N.
HypergeomExpectation hypergeom_expected_overlap(long long population, long long labeled,
                                                long long draws);

}  // namespace forgetcurate::validation
