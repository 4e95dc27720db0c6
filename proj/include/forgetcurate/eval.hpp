#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace forgetcurate::eval {

struct Candidate {
  std::string text;
  std::optional<bool> round_trip_ok;
  std::optional<int> superclass;
};

// Ranked predictions for one target, in model order.
struct PredictionSet {
  std::int64_t target_id = 0;
  std::vector<Candidate> candidates;
};

// Fraction of truth targets whose product appears in the first n ranked
// candidates. Candidate and truth strings are compared after product
// normalization (largest fragment). Targets present in `truths` but missing
// from `sets` count as misses; a set without a truth throws
// Error(missing_truth).
double top_n_accuracy(std::span<const PredictionSet> sets,
                      const std::map<std::int64_t, std::string>& truths, int n);

// Fraction of (target, candidate) pairs whose round trip recovered the
// product. Throws Error(missing_round_trip) when a flag is absent.
double round_trip_accuracy(std::span<const PredictionSet> sets);

// Fraction of targets with at least one round-trip-valid candidate.
double coverage(std::span<const PredictionSet> sets);

// Mean number of distinct superclasses among round-trip-valid candidates.
// Targets without a valid candidate contribute 0; with covered_only they are
// dropped from the mean instead. Throws Error(missing_class) when a
// candidate has no superclass.
double class_diversity(std::span<const PredictionSet> sets, bool covered_only = false);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// Wilson score interval for a binomial proportion, clamped to [0, 1].
// Throws Error(empty_sample) when n == 0.
WilsonInterval wilson_interval(long long successes, long long n, double z = 1.96);

}  // namespace forgetcurate::eval
