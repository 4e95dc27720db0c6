#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "forgetcurate/events.hpp"
#include "forgetcurate/reaction.hpp"

namespace forgetcurate::removal {

// Table 1 removal percentages.
inline constexpr std::array<double, 9> kDefaultCutFractions = {
    0.001, 0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.40};

// Most-removable-first ordering over a dataset: the never-learnt block comes
// first (ascending id), then finite counts in non-increasing order with ties
// broken by ascending id. Never-forgotten examples end up at the tail.
struct RemovalSchedule {
  std::vector<std::int64_t> ordered_ids;
  std::size_t dataset_size = 0;
  std::vector<double> cut_fractions{kDefaultCutFractions.begin(),
                                    kDefaultCutFractions.end()};
};

RemovalSchedule rank_for_removal(std::span<const events::ForgettingProfile> profiles);

// First floor(f * dataset_size) ids of the schedule. Throws
// Error(insufficient_forgotten_pool) when that exceeds the schedule length.
std::vector<std::int64_t> take_fraction(const RemovalSchedule& schedule, double fraction);

// Uniform sample without replacement of floor(f * |ids|), deterministic per
// seed. Returned ids are sorted.
std::vector<std::int64_t> random_null(std::vector<std::int64_t> ids, double fraction,
                                      std::uint64_t seed);

// Uniform sample of floor(f * |records|) drawn only from the given
// superclass. Throws Error(insufficient_class_pool) when the pool is smaller
// than the requested count.
std::vector<std::int64_t> class_restricted_null(
    std::span<const reaction::ReactionRecord> records, int class_id,
    double fraction, std::uint64_t seed);

}  // namespace forgetcurate::removal
