#include "forgetcurate/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/reaction.hpp"

namespace forgetcurate::eval {

double top_n_accuracy(std::span<const PredictionSet> sets,
                      const std::map<std::int64_t, std::string>& truths, int n) {
  if (n < 1) fail(ErrorKind::parameter_error, "top-n needs n >= 1");
  if (truths.empty()) fail(ErrorKind::empty_sample, "no truth targets");
  std::size_t hits = 0;
  for (const auto& set : sets) {
    auto it = truths.find(set.target_id);
    if (it == truths.end())
      fail(ErrorKind::missing_truth,
           "no truth for target " + std::to_string(set.target_id));
    const std::string truth = reaction::normalize_product(it->second);
    const std::size_t limit =
        std::min(set.candidates.size(), static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < limit; ++r) {
      if (reaction::normalize_product(set.candidates[r].text) == truth) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(truths.size());
}

double round_trip_accuracy(std::span<const PredictionSet> sets) {
  std::size_t ok = 0, pairs = 0;
  for (const auto& set : sets) {
    for (const auto& candidate : set.candidates) {
      if (!candidate.round_trip_ok)
        fail(ErrorKind::missing_round_trip,
             "candidate without round-trip flag for target " +
                 std::to_string(set.target_id));
      ++pairs;
      if (*candidate.round_trip_ok) ++ok;
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(pairs);
}

double coverage(std::span<const PredictionSet> sets) {
  if (sets.empty()) return 0.0;
  std::size_t covered = 0;
  for (const auto& set : sets) {
    for (const auto& candidate : set.candidates) {
      if (!candidate.round_trip_ok)
        fail(ErrorKind::missing_round_trip,
             "candidate without round-trip flag for target " +
                 std::to_string(set.target_id));
      if (*candidate.round_trip_ok) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(sets.size());
}

double class_diversity(std::span<const PredictionSet> sets, bool covered_only) {
  if (sets.empty()) return 0.0;
  double total = 0.0;
  std::size_t denominator = 0;
  for (const auto& set : sets) {
    std::set<int> classes;
    for (const auto& candidate : set.candidates) {
      if (!candidate.round_trip_ok)
        fail(ErrorKind::missing_round_trip,
             "candidate without round-trip flag for target " +
                 std::to_string(set.target_id));
      if (!candidate.superclass)
        fail(ErrorKind::missing_class,
             "candidate without superclass for target " +
                 std::to_string(set.target_id));
      if (!*candidate.round_trip_ok) continue;
      classes.insert(*candidate.superclass);
    }
    if (covered_only && classes.empty()) continue;
    total += static_cast<double>(classes.size());
    ++denominator;
  }
  return denominator == 0 ? 0.0 : total / static_cast<double>(denominator);
}

WilsonInterval wilson_interval(long long successes, long long n, double z) {
  if (n <= 0) fail(ErrorKind::empty_sample, "wilson interval needs n >= 1");
  if (successes < 0 || successes > n)
    fail(ErrorKind::parameter_error, "successes must lie in [0, n]");
  const double nn = static_cast<double>(n);
  const double p_hat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denominator = 1.0 + z2 / nn;
  const double center = (p_hat + z2 / (2.0 * nn)) / denominator;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) / denominator;
  WilsonInterval interval;
  interval.lower = std::max(0.0, center - half);
  interval.upper = std::min(1.0, center + half);
  return interval;
}

}  // namespace forgetcurate::eval
