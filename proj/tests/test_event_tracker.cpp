#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/events.hpp"
#include "forgetcurate/rng.hpp"

using namespace forgetcurate;
using namespace forgetcurate::events;

namespace {

// Independent oracle: enumerate consecutive transition pairs directly.
struct OracleProfile {
  bool learnt = false;
  int forgets = 0;
  int learns = 0;
};

OracleProfile oracle_row(const std::vector<std::uint8_t>& row) {
  OracleProfile p;
  for (std::uint8_t v : row) p.learnt = p.learnt || v == 1;
  for (std::size_t t = 0; t + 1 < row.size(); ++t) {
    if (row[t] == 1 && row[t + 1] == 0) ++p.forgets;
    if (row[t] == 0 && row[t + 1] == 1) ++p.learns;
  }
  return p;
}

CorrectnessMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t epochs) {
  std::vector<std::vector<std::uint8_t>> data(rows);
  std::vector<std::int64_t> ids(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    ids[i] = static_cast<std::int64_t>(i);
    data[i].resize(epochs);
    for (auto& v : data[i]) v = static_cast<std::uint8_t>(rng.below(2));
  }
  return CorrectnessMatrix::from_rows(std::move(ids), data, MatrixKind::forward);
}

}  // namespace

TEST_CASE("profile examples from the event definitions") {
  auto matrix = CorrectnessMatrix::from_rows(
      {0, 1, 2}, {{0, 1, 0, 1, 1}, {0, 0, 0}, {1, 1, 1}}, MatrixKind::forward);
  // rows have different lengths -> must throw
  CHECK_THROWS_AS(CorrectnessMatrix::from_rows({0, 1}, {{0, 1}, {0}}, MatrixKind::forward),
                  Error);

  auto m1 = CorrectnessMatrix::from_rows({0}, {{0, 1, 0, 1, 1}}, MatrixKind::forward);
  auto p1 = compute_profiles(m1);
  CHECK(p1[0].n_learning == 2);
  CHECK(p1[0].n_forgetting == 1);
  CHECK(p1[0].learnt_ever);
  CHECK_FALSE(p1[0].never_forgotten);
  CHECK(p1[0].final_state == 1);

  auto m2 = CorrectnessMatrix::from_rows({0}, {{0, 0, 0}}, MatrixKind::forward);
  auto p2 = compute_profiles(m2);
  CHECK(p2[0].never_learnt());
  CHECK(p2[0].forgetting_or(50) == 50);

  auto m3 = CorrectnessMatrix::from_rows({0}, {{1, 1, 1}}, MatrixKind::forward);
  auto p3 = compute_profiles(m3);
  CHECK(p3[0].n_forgetting == 0);
  CHECK(p3[0].n_learning == 0);
  CHECK(p3[0].never_forgotten);
  (void)matrix;
}

TEST_CASE("matrix construction validates shape and values") {
  CHECK_THROWS_AS(CorrectnessMatrix({0}, 0, {}, MatrixKind::forward), Error);
  CHECK_THROWS_AS(CorrectnessMatrix({0}, 2, {0, 2}, MatrixKind::forward), Error);
  CHECK_THROWS_AS(CorrectnessMatrix({0}, 2, {0}, MatrixKind::forward), Error);
}

TEST_CASE("compute_profiles matches the brute-force oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng.below(50);
    const std::size_t epochs = 1 + rng.below(50);
    const CorrectnessMatrix matrix = random_matrix(rng, rows, epochs);
    const auto profiles = compute_profiles(matrix);
    REQUIRE(profiles.size() == rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const auto row = matrix.row(i);
      const OracleProfile expected =
          oracle_row(std::vector<std::uint8_t>(row.begin(), row.end()));
      CHECK(profiles[i].learnt_ever == expected.learnt);
      if (expected.learnt) {
        CHECK(profiles[i].n_forgetting == expected.forgets);
        CHECK(profiles[i].never_forgotten == (expected.forgets == 0));
      }
      CHECK(profiles[i].n_learning == expected.learns);
    }
  }
}

TEST_CASE("learning minus forgetting equals the state delta") {
  Rng rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    const CorrectnessMatrix matrix = random_matrix(rng, 30, 20);
    const auto profiles = compute_profiles(matrix);
    long long lhs = 0, rhs = 0;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      lhs += profiles[i].n_learning - profiles[i].n_forgetting;
      rhs += matrix.row(i).back() - matrix.row(i).front();
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("profiles are invariant under row permutation") {
  Rng rng(5);
  const CorrectnessMatrix matrix = random_matrix(rng, 40, 15);
  auto profiles = compute_profiles(matrix);

  std::vector<std::size_t> perm(matrix.rows());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::int64_t> ids;
  for (std::size_t i : perm) {
    auto row = matrix.row(i);
    rows.emplace_back(row.begin(), row.end());
    ids.push_back(matrix.example_ids()[i]);
  }
  auto permuted =
      compute_profiles(CorrectnessMatrix::from_rows(std::move(ids), rows, MatrixKind::forward));

  auto by_id = [](const ForgettingProfile& a, const ForgettingProfile& b) {
    return a.example_id < b.example_id;
  };
  std::sort(profiles.begin(), profiles.end(), by_id);
  std::sort(permuted.begin(), permuted.end(), by_id);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    CHECK(profiles[i].example_id == permuted[i].example_id);
    CHECK(profiles[i].learnt_ever == permuted[i].learnt_ever);
    CHECK(profiles[i].n_forgetting == permuted[i].n_forgetting);
    CHECK(profiles[i].n_learning == permuted[i].n_learning);
  }
}

TEST_CASE("histogram counts learnt examples only") {
  auto matrix = CorrectnessMatrix::from_rows(
      {0, 1, 2}, {{0, 1, 1}, {0, 0, 0}, {0, 1, 0}}, MatrixKind::forward);
  const auto profiles = compute_profiles(matrix);
  const ProfileHistogram hist = profile_histogram(profiles);
  CHECK(hist.counts == std::map<int, std::size_t>{{0, 1}, {1, 1}});
  CHECK(hist.learnt == 2);
  CHECK(hist.never_learnt == 1);
  CHECK(hist.learnt_fraction() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("all-never-learnt histogram is empty") {
  auto matrix =
      CorrectnessMatrix::from_rows({0, 1}, {{0, 0}, {0, 0}}, MatrixKind::forward);
  const ProfileHistogram hist = profile_histogram(compute_profiles(matrix));
  CHECK(hist.counts.empty());
  CHECK(hist.never_learnt == 2);
  CHECK(hist.learnt_fraction() == 0.0);
}

TEST_CASE("per-class histograms partition the global one") {
  Rng rng(77);
  const CorrectnessMatrix matrix = random_matrix(rng, 60, 12);
  const auto profiles = compute_profiles(matrix);
  std::map<std::int64_t, int> class_of;
  for (const auto& p : profiles)
    class_of[p.example_id] = static_cast<int>(p.example_id % 2);

  const ProfileHistogram global = profile_histogram(profiles);
  const auto per_class = profile_histogram_by_class(profiles, class_of);
  std::size_t learnt = 0, never = 0;
  std::map<int, std::size_t> merged;
  for (const auto& [cls, hist] : per_class) {
    learnt += hist.learnt;
    never += hist.never_learnt;
    for (const auto& [k, v] : hist.counts) merged[k] += v;
  }
  CHECK(learnt == global.learnt);
  CHECK(never == global.never_learnt);
  CHECK(merged == global.counts);
}
