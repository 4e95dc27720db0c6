#include "forgetcurate/noise.hpp"

#include <algorithm>
#include <unordered_map>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/rng.hpp"

namespace forgetcurate::noise {

NoiseResult shuffle_products(std::span<reaction::ReactionRecord> records,
                             std::uint64_t seed) {
  NoiseResult result;
  if (records.size() < 2) return result;
  std::vector<std::string> products;
  products.reserve(records.size());
  for (const auto& record : records) products.push_back(record.product);
  Rng rng(seed);
  rng.shuffle(products);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].product != products[i]) {
      records[i].product = std::move(products[i]);
      result.noisy_ids.push_back(records[i].id);
    }
  }
  std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
  return result;
}

NoiseResult shuffle_products_subset(std::span<reaction::ReactionRecord> records,
                                    std::span<const std::int64_t> subset_ids,
                                    std::uint64_t seed) {
  NoiseResult result;
  if (subset_ids.size() < 2) return result;
  std::unordered_map<std::int64_t, std::size_t> position;
  position.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) position.emplace(records[i].id, i);

  std::vector<std::int64_t> ordered(subset_ids.begin(), subset_ids.end());
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::size_t> slots;
  slots.reserve(ordered.size());
  for (std::int64_t id : ordered) {
    auto it = position.find(id);
    if (it == position.end())
      fail(ErrorKind::id_mismatch, "no record for subset id " + std::to_string(id));
    slots.push_back(it->second);
  }

  std::vector<std::string> products;
  products.reserve(slots.size());
  for (std::size_t slot : slots) products.push_back(records[slot].product);
  Rng rng(seed);
  rng.shuffle(products);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    reaction::ReactionRecord& record = records[slots[i]];
    if (record.product != products[i]) {
      record.product = std::move(products[i]);
      result.noisy_ids.push_back(record.id);
    }
  }
  std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
  return result;
}

NoiseResult topk_substitute(
    std::span<reaction::ReactionRecord> records,
    const std::map<std::int64_t, std::vector<std::string>>& ranked_predictions,
    int k) {
  if (k < 1) fail(ErrorKind::parameter_error, "k must be at least 1");
  NoiseResult result;
  for (auto& record : records) {
    auto it = ranked_predictions.find(record.id);
    if (it == ranked_predictions.end() ||
        it->second.size() < static_cast<std::size_t>(k)) {
      ++result.skipped;
      continue;
    }
    const std::string& candidate = it->second[static_cast<std::size_t>(k) - 1];
    if (candidate == record.product) continue;  // would not be noise
    record.product = candidate;
    result.noisy_ids.push_back(record.id);
  }
  std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
  return result;
}

RecallBuckets bucket_rates(std::span<const events::ForgettingProfile> profiles,
                           std::span<const std::int64_t> ids) {
  RecallBuckets buckets;
  if (ids.empty()) return buckets;
  std::unordered_map<std::int64_t, const events::ForgettingProfile*> by_id;
  by_id.reserve(profiles.size());
  for (const auto& p : profiles) by_id.emplace(p.example_id, &p);

  std::size_t never = 0, five_plus = 0, one_plus = 0;
  for (std::int64_t id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      fail(ErrorKind::id_mismatch, "no profile for id " + std::to_string(id));
    const events::ForgettingProfile& p = *it->second;
    if (p.never_learnt()) {
      ++never;
      ++five_plus;
      ++one_plus;
    } else {
      if (p.n_forgetting >= 5) ++five_plus;
      if (p.n_forgetting >= 1) ++one_plus;
    }
  }
  const double n = static_cast<double>(ids.size());
  buckets.never_learnt = static_cast<double>(never) / n;
  buckets.never_or_5plus = static_cast<double>(five_plus) / n;
  buckets.never_or_1plus = static_cast<double>(one_plus) / n;
  return buckets;
}

}  // namespace forgetcurate::noise
