#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/removal.hpp"
#include "forgetcurate/rng.hpp"

using namespace forgetcurate;
using namespace forgetcurate::removal;
using forgetcurate::events::ForgettingProfile;

namespace {

ForgettingProfile learnt(std::int64_t id, int forgets) {
  ForgettingProfile p;
  p.example_id = id;
  p.learnt_ever = true;
  p.n_forgetting = forgets;
  p.never_forgotten = forgets == 0;
  return p;
}

ForgettingProfile never_learnt(std::int64_t id) {
  ForgettingProfile p;
  p.example_id = id;
  p.learnt_ever = false;
  return p;
}

std::vector<ForgettingProfile> random_profiles(Rng& rng, std::size_t n) {
  std::vector<ForgettingProfile> profiles;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.below(5) == 0)
      profiles.push_back(never_learnt(static_cast<std::int64_t>(i)));
    else
      profiles.push_back(
          learnt(static_cast<std::int64_t>(i), static_cast<int>(rng.below(8))));
  }
  return profiles;
}

}  // namespace

TEST_CASE("ranking puts never-learnt first, then descending counts") {
  std::vector<ForgettingProfile> profiles = {learnt(10, 0), never_learnt(7),
                                             learnt(3, 3)};
  const RemovalSchedule schedule = rank_for_removal(profiles);
  CHECK(schedule.ordered_ids == std::vector<std::int64_t>{7, 3, 10});
  CHECK(schedule.dataset_size == 3);
  CHECK(schedule.cut_fractions.size() == 9);
}

TEST_CASE("equal counts break ties by ascending id") {
  std::vector<ForgettingProfile> profiles = {learnt(9, 2), learnt(4, 2),
                                             never_learnt(8), never_learnt(2)};
  const RemovalSchedule schedule = rank_for_removal(profiles);
  CHECK(schedule.ordered_ids == std::vector<std::int64_t>{2, 8, 4, 9});
}

TEST_CASE("ranking matches an independent stable-sort oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto profiles = random_profiles(rng, 200);
    rng.shuffle(profiles);
    const RemovalSchedule schedule = rank_for_removal(profiles);

    // oracle: stable sort on a pre-sorted-by-id copy with a coarse key
    auto oracle = profiles;
    std::sort(oracle.begin(), oracle.end(),
              [](const ForgettingProfile& a, const ForgettingProfile& b) {
                return a.example_id < b.example_id;
              });
    std::stable_sort(oracle.begin(), oracle.end(),
                     [](const ForgettingProfile& a, const ForgettingProfile& b) {
                       const long long ka =
                           a.never_learnt() ? -1 : 1000000LL - a.n_forgetting;
                       const long long kb =
                           b.never_learnt() ? -1 : 1000000LL - b.n_forgetting;
                       return ka < kb;
                     });
    std::vector<std::int64_t> expected;
    for (const auto& p : oracle) expected.push_back(p.example_id);
    CHECK(schedule.ordered_ids == expected);
  }
}

TEST_CASE("take_fraction floors and nests") {
  Rng rng(1);
  std::vector<ForgettingProfile> profiles = random_profiles(rng, 1000);
  const RemovalSchedule schedule = rank_for_removal(profiles);
  CHECK(take_fraction(schedule, 0.25).size() == 250);
  CHECK(take_fraction(schedule, 0.0).empty());
  CHECK_THROWS_AS(take_fraction(schedule, 1.5), Error);

  std::vector<std::int64_t> previous;
  for (double f : schedule.cut_fractions) {
    const auto current = take_fraction(schedule, f);
    // prefix nesting: every smaller cut is a prefix of the larger one
    REQUIRE(previous.size() <= current.size());
    CHECK(std::equal(previous.begin(), previous.end(), current.begin()));
    previous = current;
  }
}

TEST_CASE("never-learnt ids always precede finite-count ids") {
  Rng rng(77);
  const auto profiles = random_profiles(rng, 500);
  const RemovalSchedule schedule = rank_for_removal(profiles);
  std::set<std::int64_t> never;
  for (const auto& p : profiles)
    if (p.never_learnt()) never.insert(p.example_id);
  bool seen_finite = false;
  for (std::int64_t id : schedule.ordered_ids) {
    if (never.count(id)) {
      CHECK_FALSE(seen_finite);
    } else {
      seen_finite = true;
    }
  }
}

TEST_CASE("random null sampling is seeded and uniform") {
  std::vector<std::int64_t> ids;
  for (int i = 0; i < 100; ++i) ids.push_back(i);

  const auto all = random_null(ids, 1.0, 9);
  CHECK(all.size() == 100);

  const auto a = random_null(ids, 0.3, 5);
  const auto b = random_null(ids, 0.3, 5);
  CHECK(a == b);
  CHECK(a.size() == 30);
  const auto c = random_null(ids, 0.3, 6);
  CHECK(a != c);
}

TEST_CASE("random null class share matches the dataset share") {
  // 10,000 ids, 2,500 of them "class 0"; mean class-0 share over 100 seeds
  // must sit within 3 sigma of 0.25
  std::vector<std::int64_t> ids;
  for (int i = 0; i < 10000; ++i) ids.push_back(i);
  auto is_class0 = [](std::int64_t id) { return id % 4 == 0; };

  const int seeds = 100;
  double mean_share = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto sample = random_null(ids, 0.25, 1000 + static_cast<std::uint64_t>(s));
    std::size_t class0 = 0;
    for (std::int64_t id : sample) class0 += is_class0(id) ? 1 : 0;
    mean_share += static_cast<double>(class0) / static_cast<double>(sample.size());
  }
  mean_share /= seeds;
  // binomial sigma per draw ~ sqrt(p(1-p)/n), mean over seeds shrinks by sqrt(seeds)
  const double sigma = std::sqrt(0.25 * 0.75 / 2500.0) / std::sqrt(static_cast<double>(seeds));
  CHECK(std::abs(mean_share - 0.25) < 3.0 * sigma);
}

TEST_CASE("class-restricted null respects the pool bound") {
  std::vector<reaction::ReactionRecord> records;
  for (int i = 0; i < 100; ++i) {
    reaction::ReactionRecord r;
    r.id = i;
    r.superclass = i < 30 ? 0 : 1;
    records.push_back(r);
  }
  const auto exact = class_restricted_null(records, 0, 0.30, 3);
  CHECK(exact.size() == 30);
  std::set<std::int64_t> pool(exact.begin(), exact.end());
  for (std::int64_t id : exact) CHECK(id < 30);

  CHECK_THROWS_AS(class_restricted_null(records, 0, 0.31, 3), Error);
  try {
    class_restricted_null(records, 0, 0.31, 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_class_pool);
  }
}
