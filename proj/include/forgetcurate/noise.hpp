#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "forgetcurate/events.hpp"
#include "forgetcurate/reaction.hpp"

namespace forgetcurate::noise {

struct NoiseResult {
  std::vector<std::int64_t> noisy_ids;  // ids whose product actually changed
  std::size_t skipped = 0;              // records without enough candidates
};

// Permutes the products across the given records (the designated noise
// subset) with a seeded uniform permutation. Records whose product is
// unchanged by the permutation are not noisy.
NoiseResult shuffle_products(std::span<reaction::ReactionRecord> records,
                             std::uint64_t seed);

// Same permutation noise, but restricted to the records whose ids appear in
// subset_ids (the designated subset, e.g. a sampled 5%). Ids without a
// record throw Error(id_mismatch).
NoiseResult shuffle_products_subset(std::span<reaction::ReactionRecord> records,
                                    std::span<const std::int64_t> subset_ids,
                                    std::uint64_t seed);

// Replaces each record's product by the k-th ranked candidate. Records whose
// k-th candidate equals the true product stay unmodified and are not noisy;
// records with fewer than k candidates (or no prediction entry) are skipped
// and counted.
NoiseResult topk_substitute(
    std::span<reaction::ReactionRecord> records,
    const std::map<std::int64_t, std::vector<std::string>>& ranked_predictions,
    int k = 3);

// Fractions of `ids` that fall in the three nested forgetting buckets.
struct RecallBuckets {
  double never_learnt = 0.0;    // never learnt
  double never_or_5plus = 0.0;  // never learnt or >= 5 forgetting events
  double never_or_1plus = 0.0;  // never learnt or >= 1 forgetting event
};

// Bucket rates for an arbitrary id set (used for clean-example base rates).
// Throws Error(id_mismatch) when an id has no profile.
RecallBuckets bucket_rates(std::span<const events::ForgettingProfile> profiles,
                           std::span<const std::int64_t> ids);

// Bucket rates of the injected-noise ids: the recall of the detector.
inline RecallBuckets noise_recall(std::span<const events::ForgettingProfile> profiles,
                                  std::span<const std::int64_t> noisy_ids) {
  return bucket_rates(profiles, noisy_ids);
}

}  // namespace forgetcurate::noise
