#include "forgetcurate/removal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/rng.hpp"

namespace forgetcurate::removal {

RemovalSchedule rank_for_removal(std::span<const events::ForgettingProfile> profiles) {
  RemovalSchedule schedule;
  schedule.dataset_size = profiles.size();

  std::vector<const events::ForgettingProfile*> order;
  order.reserve(profiles.size());
  for (const auto& p : profiles) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const events::ForgettingProfile* a, const events::ForgettingProfile* b) {
              if (a->never_learnt() != b->never_learnt()) return a->never_learnt();
              if (a->never_learnt()) return a->example_id < b->example_id;
              if (a->n_forgetting != b->n_forgetting)
                return a->n_forgetting > b->n_forgetting;
              return a->example_id < b->example_id;
            });

  schedule.ordered_ids.reserve(order.size());
  for (const auto* p : order) schedule.ordered_ids.push_back(p->example_id);
  return schedule;
}

std::vector<std::int64_t> take_fraction(const RemovalSchedule& schedule, double fraction) {
  if (fraction < 0.0)
    fail(ErrorKind::parameter_error, "removal fraction must be non-negative");
  const std::size_t count = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(schedule.dataset_size)));
  if (count > schedule.ordered_ids.size())
    fail(ErrorKind::insufficient_forgotten_pool,
         "fraction asks for " + std::to_string(count) + " ids, schedule holds " +
             std::to_string(schedule.ordered_ids.size()));
  return {schedule.ordered_ids.begin(),
          schedule.ordered_ids.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::vector<std::int64_t> random_null(std::vector<std::int64_t> ids, double fraction,
                                      std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    fail(ErrorKind::parameter_error, "random-null fraction must lie in [0, 1]");
  std::sort(ids.begin(), ids.end());
  const std::size_t count = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(ids.size())));
  Rng rng(seed);
  std::vector<std::int64_t> picked = rng.sample_without_replacement(std::move(ids), count);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<std::int64_t> class_restricted_null(
    std::span<const reaction::ReactionRecord> records, int class_id,
    double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    fail(ErrorKind::parameter_error, "class-null fraction must lie in [0, 1]");
  std::vector<std::int64_t> pool;
  for (const auto& record : records) {
    if (record.superclass == class_id) pool.push_back(record.id);
  }
  std::sort(pool.begin(), pool.end());
  const std::size_t count = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(records.size())));
  if (count > pool.size())
    fail(ErrorKind::insufficient_class_pool,
         "class " + std::to_string(class_id) + " holds " + std::to_string(pool.size()) +
             " ids, fraction asks for " + std::to_string(count));
  Rng rng(seed);
  std::vector<std::int64_t> picked = rng.sample_without_replacement(std::move(pool), count);
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace forgetcurate::removal
