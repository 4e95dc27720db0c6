#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/io.hpp"
#include "forgetcurate/rng.hpp"
#include "support/synthetic.hpp"

using namespace forgetcurate;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("forgetcurate-io-" + std::to_string(Rng(std::random_device{}()).next()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("reaction files round-trip through the jsonl format") {
  TempDir dir;
  const auto records = testsupport::make_rule_dataset({120, 16, 21});
  const fs::path file = dir.path / "reactions.jsonl";
  io::write_reactions(file, records);
  const auto loaded = io::read_reactions(file);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].id == records[i].id);
    CHECK(loaded[i].precursors == records[i].precursors);
    CHECK(loaded[i].product == records[i].product);
    CHECK(loaded[i].superclass == records[i].superclass);
    CHECK(loaded[i].superclass_name == records[i].superclass_name);
  }
}

TEST_CASE("correctness matrices round-trip with their sidecar") {
  TempDir dir;
  Rng rng(3);
  std::vector<std::vector<std::uint8_t>> rows(9);
  std::vector<std::int64_t> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(static_cast<std::int64_t>(i * 3));
    rows[i].resize(7);
    for (auto& v : rows[i]) v = static_cast<std::uint8_t>(rng.below(2));
  }
  const auto matrix =
      events::CorrectnessMatrix::from_rows(ids, rows, events::MatrixKind::round_trip);

  const fs::path csv = dir.path / "correctness.csv";
  io::write_correctness_csv(csv, matrix);
  io::write_correctness_meta(csv, {events::MatrixKind::round_trip, "toy", 5});

  const auto loaded = io::read_correctness_csv(csv);
  CHECK(loaded.kind() == events::MatrixKind::round_trip);
  CHECK(loaded.example_ids() == matrix.example_ids());
  CHECK(loaded.values() == matrix.values());
  const auto meta = io::read_correctness_meta(csv);
  REQUIRE(meta.has_value());
  CHECK(meta->model == "toy");
  CHECK(meta->seed == 5);
}

TEST_CASE("profiles round-trip including never-learnt markers") {
  TempDir dir;
  auto matrix = events::CorrectnessMatrix::from_rows(
      {5, 6, 7}, {{0, 1, 0}, {0, 0, 0}, {1, 1, 1}}, events::MatrixKind::forward);
  const auto profiles = events::compute_profiles(matrix);
  const fs::path file = dir.path / "profiles.csv";
  io::write_profiles_csv(file, profiles);
  const auto loaded = io::read_profiles_csv(file);
  REQUIRE(loaded.size() == profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    CHECK(loaded[i].example_id == profiles[i].example_id);
    CHECK(loaded[i].learnt_ever == profiles[i].learnt_ever);
    CHECK(loaded[i].n_forgetting == profiles[i].n_forgetting);
    CHECK(loaded[i].n_learning == profiles[i].n_learning);
    CHECK(loaded[i].never_forgotten == profiles[i].never_forgotten);
    CHECK(loaded[i].final_state == profiles[i].final_state);
  }
}

TEST_CASE("confidence records round-trip with full precision") {
  TempDir dir;
  Rng rng(17);
  std::vector<likelihood::ConfidenceRecord> records;
  for (int i = 0; i < 50; ++i)
    records.push_back({i, static_cast<int>(rng.below(12)), rng.unit(), rng.below(2) == 1});
  const fs::path file = dir.path / "confidences.csv";
  io::write_confidences_csv(file, records);
  const auto loaded = io::read_confidences_csv(file);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].confidence == records[i].confidence);  // bit-exact
    CHECK(loaded[i].superclass == records[i].superclass);
    CHECK(loaded[i].correct == records[i].correct);
  }
}

TEST_CASE("schedules, id lists and predictions round-trip") {
  TempDir dir;
  removal::RemovalSchedule schedule;
  schedule.dataset_size = 10;
  schedule.ordered_ids = {9, 3, 1, 0, 2};
  const fs::path sfile = dir.path / "schedule.json";
  io::write_schedule_json(sfile, schedule);
  const auto sloaded = io::read_schedule_json(sfile);
  CHECK(sloaded.dataset_size == schedule.dataset_size);
  CHECK(sloaded.ordered_ids == schedule.ordered_ids);
  CHECK(sloaded.cut_fractions == schedule.cut_fractions);

  const std::vector<std::int64_t> ids = {4, 8, 15, 16, 23, 42};
  const fs::path ifile = dir.path / "removed.ids";
  io::write_ids(ifile, ids);
  CHECK(io::read_ids(ifile) == ids);

  std::vector<eval::PredictionSet> sets(2);
  sets[0].target_id = 1;
  sets[0].candidates = {{"CCO", true, 3}, {"CCN", false, 1}};
  sets[1].target_id = 2;
  sets[1].candidates = {{"C", std::nullopt, std::nullopt}};
  const fs::path pfile = dir.path / "predictions.jsonl";
  io::write_predictions(pfile, sets);
  const auto ploaded = io::read_predictions(pfile);
  REQUIRE(ploaded.size() == 2);
  CHECK(ploaded[0].candidates[0].text == "CCO");
  CHECK(ploaded[0].candidates[0].round_trip_ok == true);
  CHECK(ploaded[0].candidates[0].superclass == 3);
  CHECK_FALSE(ploaded[1].candidates[0].round_trip_ok.has_value());
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(io::read_reactions("/nonexistent/path.jsonl"), Error);
  CHECK_THROWS_AS(io::read_ids("/nonexistent/file.ids"), Error);
}
