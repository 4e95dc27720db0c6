// forgetcurate: noise reduction for reaction datasets driven by per-example
// forgetting events, plus the statistical evaluation suite.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/eval.hpp"
#include "forgetcurate/events.hpp"
#include "forgetcurate/io.hpp"
#include "forgetcurate/likelihood.hpp"
#include "forgetcurate/noise.hpp"
#include "forgetcurate/reaction.hpp"
#include "forgetcurate/removal.hpp"
#include "forgetcurate/rng.hpp"
#include "forgetcurate/toy_model.hpp"
#include "forgetcurate/validation.hpp"

namespace fc = forgetcurate;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_pct(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", fraction * 100.0);
  return buffer;
}

fs::path prepare_output_dir(const std::string& dir) {
  fs::path path(dir);
  fs::create_directories(path);
  return path;
}

std::string join_command(int argc, char** argv) {
  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) command += ' ';
    command += argv[i];
  }
  return command;
}

void write_json(const fs::path& path, const json& j) {
  fc::io::write_text(path, j.dump(2) + "\n");
}

std::vector<fc::reaction::ReactionRecord> drop_ids(
    const std::vector<fc::reaction::ReactionRecord>& records,
    const std::vector<std::int64_t>& removed) {
  const std::set<std::int64_t> gone(removed.begin(), removed.end());
  std::vector<fc::reaction::ReactionRecord> kept;
  kept.reserve(records.size() - gone.size());
  for (const auto& record : records) {
    if (!gone.count(record.id)) kept.push_back(record);
  }
  return kept;
}

struct ManifestScope {
  fs::path dir;
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<fs::path> inputs;

  void write() const { fc::io::write_manifest(dir, command, parameters, inputs); }
};

// ---- subcommand bodies -------------------------------------------------

int run_preprocess(const std::string& input, const std::string& out_dir,
                   const std::string& output_name, const std::string& report_name,
                   ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto raw = fc::io::read_raw_reactions(input);
  const fc::reaction::FilterResult result = fc::reaction::filter_dataset(raw);
  fc::io::write_reactions(dir / output_name, result.records);
  fc::io::write_filter_report(dir / report_name, result.report);
  manifest.dir = dir;
  manifest.inputs = {input};
  manifest.write();
  std::cerr << "kept " << result.report.kept << " of " << result.report.input
            << " records (duplicate " << result.report.duplicate << ", multi-product "
            << result.report.multi_product << ", purification "
            << result.report.purification << ", malformed " << result.report.malformed
            << ")\n";
  return 0;
}

int run_split(const std::string& input, std::uint64_t seed,
              std::vector<double> fractions, const std::string& out_dir,
              ManifestScope manifest) {
  if (fractions.empty()) fractions = {0.90, 0.05, 0.05};
  if (fractions.size() != 3)
    fc::fail(fc::ErrorKind::parameter_error, "--fractions needs exactly 3 values");
  const fs::path dir = prepare_output_dir(out_dir);
  const auto records = fc::io::read_reactions(input);
  const fc::reaction::DatasetSplit split = fc::reaction::split_by_product(
      records, {fractions[0], fractions[1], fractions[2]}, seed);

  std::map<std::int64_t, const fc::reaction::ReactionRecord*> by_id;
  for (const auto& record : records) by_id[record.id] = &record;
  auto emit = [&](const std::vector<std::int64_t>& ids, const std::string& name) {
    std::vector<fc::reaction::ReactionRecord> subset;
    subset.reserve(ids.size());
    for (std::int64_t id : ids) subset.push_back(*by_id.at(id));
    fc::io::write_reactions(dir / name, subset);
  };
  emit(split.train_ids, "train.jsonl");
  emit(split.valid_ids, "valid.jsonl");
  emit(split.test_ids, "test.jsonl");

  json j;
  j["seed"] = split.seed;
  j["train"] = split.train_ids.size();
  j["valid"] = split.valid_ids.size();
  j["test"] = split.test_ids.size();
  write_json(dir / "split.json", j);
  manifest.dir = dir;
  manifest.inputs = {input};
  manifest.write();
  return 0;
}

int run_train_toy(const std::string& reactions, const std::string& eval_path,
                  fc::toy::ToyModelConfig config, int topk,
                  const std::string& out_dir, ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto train_records = fc::io::read_reactions(reactions);
  const fc::toy::ToyVocabulary vocabulary = fc::toy::build_vocabulary(train_records);
  const fc::toy::ToyTask task = fc::toy::make_task(train_records, vocabulary);

  const fc::toy::TrainResult result = fc::toy::train_and_track(task, config);

  fc::io::write_correctness_csv(dir / "correctness.csv", result.matrix);
  fc::io::write_correctness_meta(dir / "correctness.csv",
                                 {fc::events::MatrixKind::forward, "toy-softmax-linear",
                                  config.seed});
  fc::io::write_confidences_csv(dir / "confidences.csv", result.train_confidences);

  manifest.inputs = {reactions};
  if (!eval_path.empty()) {
    const auto eval_records = fc::io::read_reactions(eval_path);
    const fc::toy::ToyTask eval_task = fc::toy::make_task(eval_records, vocabulary);
    fc::io::write_confidences_csv(dir / "eval_confidences.csv",
                                  fc::toy::evaluate(result.model, eval_task.examples));
    json acc;
    acc["top1"] = fc::toy::top1_accuracy(result.model, eval_task.examples);
    acc["examples"] = eval_task.examples.size();
    write_json(dir / "eval_top1.json", acc);
    manifest.inputs.push_back(eval_path);
  }

  if (topk > 0) {
    std::vector<fc::eval::PredictionSet> predictions;
    predictions.reserve(task.examples.size());
    for (const auto& example : task.examples) {
      fc::eval::PredictionSet set;
      set.target_id = example.id;
      for (const auto& [label, confidence] : result.model.predict_topk(example.tokens, topk)) {
        fc::eval::Candidate candidate;
        candidate.text = vocabulary.products[static_cast<std::size_t>(label)];
        candidate.superclass = example.superclass;
        set.candidates.push_back(std::move(candidate));
      }
      predictions.push_back(std::move(set));
    }
    fc::io::write_predictions(dir / "topk_predictions.jsonl", predictions);
  }

  manifest.dir = dir;
  manifest.write();
  return 0;
}

int run_track(const std::string& correctness, const std::string& reactions,
              const std::string& out_dir, ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto matrix = fc::io::read_correctness_csv(correctness);
  const auto profiles = fc::events::compute_profiles(matrix);
  fc::io::write_profiles_csv(dir / "profiles.csv", profiles);

  auto histogram_json = [](const fc::events::ProfileHistogram& hist) {
    json j;
    json counts = json::object();
    for (const auto& [k, v] : hist.counts) counts[std::to_string(k)] = v;
    j["counts"] = std::move(counts);
    j["learnt"] = hist.learnt;
    j["never_learnt"] = hist.never_learnt;
    j["learnt_fraction"] = hist.learnt_fraction();
    return j;
  };

  json j = histogram_json(fc::events::profile_histogram(profiles));
  manifest.inputs = {correctness};
  if (!reactions.empty()) {
    const auto records = fc::io::read_reactions(reactions);
    std::map<std::int64_t, int> class_of;
    for (const auto& record : records) class_of[record.id] = record.superclass;
    json per_class = json::object();
    for (const auto& [cls, hist] :
         fc::events::profile_histogram_by_class(profiles, class_of))
      per_class[std::to_string(cls)] = histogram_json(hist);
    j["per_class"] = std::move(per_class);
    manifest.inputs.push_back(reactions);
  }
  write_json(dir / "histogram.json", j);
  manifest.dir = dir;
  manifest.write();
  return 0;
}

int run_rank(const std::string& profiles_path, const std::string& out_dir,
             ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto profiles = fc::io::read_profiles_csv(profiles_path);
  fc::io::write_schedule_json(dir / "schedule.json", fc::removal::rank_for_removal(profiles));
  manifest.dir = dir;
  manifest.inputs = {profiles_path};
  manifest.write();
  return 0;
}

int run_clean(double fraction, const std::string& schedule_path,
              const std::string& reactions, const std::string& out_dir,
              ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto schedule = fc::io::read_schedule_json(schedule_path);
  const auto removed = fc::removal::take_fraction(schedule, fraction);
  const auto records = fc::io::read_reactions(reactions);

  const std::string pct = format_pct(fraction);
  fc::io::write_ids(dir / ("removed_" + pct + ".ids"), removed);
  fc::io::write_reactions(dir / ("cleaned_" + pct + ".jsonl"), drop_ids(records, removed));
  manifest.dir = dir;
  manifest.inputs = {schedule_path, reactions};
  manifest.write();
  return 0;
}

int run_null_sample(const std::string& mode, double fraction, std::uint64_t seed,
                    const std::string& reactions, int class_id,
                    const std::string& out_dir, ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto records = fc::io::read_reactions(reactions);
  std::vector<std::int64_t> removed;
  if (mode == "random") {
    std::vector<std::int64_t> ids;
    ids.reserve(records.size());
    for (const auto& record : records) ids.push_back(record.id);
    removed = fc::removal::random_null(std::move(ids), fraction, seed);
  } else {
    removed = fc::removal::class_restricted_null(records, class_id, fraction, seed);
  }
  const std::string pct = format_pct(fraction);
  fc::io::write_ids(dir / ("removed_" + pct + ".ids"), removed);
  fc::io::write_reactions(dir / ("cleaned_" + pct + ".jsonl"), drop_ids(records, removed));
  manifest.dir = dir;
  manifest.inputs = {reactions};
  manifest.write();
  return 0;
}

int run_inject_noise(const std::string& reactions, const std::string& mode,
                     double subset_fraction, const std::string& subset_ids_path,
                     std::uint64_t seed, const std::string& predictions_path, int k,
                     const std::string& out_dir, ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  auto records = fc::io::read_reactions(reactions);
  manifest.inputs = {reactions};

  std::vector<std::int64_t> subset;
  if (!subset_ids_path.empty()) {
    subset = fc::io::read_ids(subset_ids_path);
    manifest.inputs.push_back(subset_ids_path);
  } else {
    std::vector<std::int64_t> ids;
    ids.reserve(records.size());
    for (const auto& record : records) ids.push_back(record.id);
    // the designated subset itself is a seeded uniform sample
    subset = fc::removal::random_null(std::move(ids), subset_fraction, seed);
  }

  fc::noise::NoiseResult result;
  if (mode == "shuffle") {
    result = fc::noise::shuffle_products_subset(records, subset, seed + 1);
  } else {
    const auto sets = fc::io::read_predictions(predictions_path);
    manifest.inputs.push_back(predictions_path);
    std::map<std::int64_t, std::vector<std::string>> ranked;
    for (const auto& set : sets) {
      auto& texts = ranked[set.target_id];
      for (const auto& candidate : set.candidates) texts.push_back(candidate.text);
    }
    const std::set<std::int64_t> chosen(subset.begin(), subset.end());
    std::vector<fc::reaction::ReactionRecord*> targeted;
    for (auto& record : records)
      if (chosen.count(record.id)) targeted.push_back(&record);
    // apply in-place over the designated subset only
    std::vector<fc::reaction::ReactionRecord> scratch;
    scratch.reserve(targeted.size());
    for (auto* record : targeted) scratch.push_back(*record);
    result = fc::noise::topk_substitute(scratch, ranked, k);
    for (std::size_t i = 0; i < targeted.size(); ++i) *targeted[i] = scratch[i];
  }

  fc::io::write_reactions(dir / "noisy.jsonl", records);
  fc::io::write_ids(dir / "noisy_ids.txt", result.noisy_ids);
  json j;
  j["mode"] = mode;
  j["subset_size"] = subset.size();
  j["noisy"] = result.noisy_ids.size();
  j["skipped"] = result.skipped;
  write_json(dir / "noise_report.json", j);
  manifest.dir = dir;
  manifest.write();
  return 0;
}

int run_metrics(const std::string& predictions_path, const std::string& truths_path,
                std::vector<int> topn, double z, const std::string& out_dir,
                ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto sets = fc::io::read_predictions(predictions_path);
  const auto truth_records = fc::io::read_reactions(truths_path);
  std::map<std::int64_t, std::string> truths;
  for (const auto& record : truth_records) truths[record.id] = record.product;

  std::sort(topn.begin(), topn.end());
  topn.erase(std::unique(topn.begin(), topn.end()), topn.end());
  if (topn.empty()) topn = {1, 2, 5};

  json j;
  json per_n = json::object();
  for (int n : topn)
    per_n[std::to_string(n)] = fc::eval::top_n_accuracy(sets, truths, n);
  const double top1 = fc::eval::top_n_accuracy(sets, truths, 1);
  j["top1"] = top1;
  j["top2"] = fc::eval::top_n_accuracy(sets, truths, 2);
  j["topn"] = std::move(per_n);

  bool have_round_trip = true;
  for (const auto& set : sets)
    for (const auto& candidate : set.candidates)
      have_round_trip = have_round_trip && candidate.round_trip_ok.has_value();
  if (have_round_trip && !sets.empty()) {
    j["round_trip"] = fc::eval::round_trip_accuracy(sets);
    j["coverage"] = fc::eval::coverage(sets);
    bool have_class = true;
    for (const auto& set : sets)
      for (const auto& candidate : set.candidates)
        have_class = have_class && candidate.superclass.has_value();
    if (have_class) j["class_diversity"] = fc::eval::class_diversity(sets);
  }

  const long long n_targets = static_cast<long long>(truths.size());
  const long long successes = std::llround(top1 * static_cast<double>(n_targets));
  const fc::eval::WilsonInterval wilson = fc::eval::wilson_interval(successes, n_targets, z);
  j["wilson"] = {{"metric", "top1"},
                 {"lower", wilson.lower},
                 {"upper", wilson.upper},
                 {"z", z},
                 {"n", n_targets}};

  write_json(dir / "metrics.json", j);
  manifest.dir = dir;
  manifest.inputs = {predictions_path, truths_path};
  manifest.write();
  return 0;
}

int run_cjsd(const std::string& confidences_path, int bins, int exclude_class,
             std::optional<double> coefficient, const std::string& out_dir,
             ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);
  const auto records = fc::io::read_confidences_csv(confidences_path);
  const fc::likelihood::ClassCdfs built = fc::likelihood::build_class_cdfs(records, bins);
  for (int cls : built.skipped_classes)
    std::cerr << "warning: superclass " << cls
              << " has no correct predictions; skipped\n";

  fc::likelihood::CjsdOptions all_options;
  all_options.averaging_coefficient = coefficient;
  const double all = fc::likelihood::cjsd(built.cdfs, all_options);

  fc::likelihood::CjsdOptions excl_options = all_options;
  excl_options.exclude_class = exclude_class;
  const double excluded = fc::likelihood::cjsd(built.cdfs, excl_options);

  auto sqrt_of = [](double v) { return std::sqrt(std::max(v, 0.0)); };
  json j;
  j["bins"] = bins;
  j["cjsd_all"] = all;
  j["sqrt_cjsd_all"] = sqrt_of(all);
  j["excluded_class"] = exclude_class;
  if (exclude_class == fc::reaction::kResolutionsClass) {
    j["cjsd_no_resolutions"] = excluded;
    j["sqrt_cjsd_no_resolutions"] = sqrt_of(excluded);
  } else {
    j["cjsd_excluded"] = excluded;
    j["sqrt_cjsd_excluded"] = sqrt_of(excluded);
  }
  json per_class = json::array();
  for (const auto& cdf : built.cdfs) {
    per_class.push_back({{"superclass", cdf.superclass},
                         {"gcre", fc::likelihood::gcre(cdf)},
                         {"samples", cdf.sample_count}});
  }
  j["per_class"] = std::move(per_class);
  j["skipped_classes"] = built.skipped_classes;

  write_json(dir / "cjsd.json", j);
  manifest.dir = dir;
  manifest.inputs = {confidences_path};
  manifest.write();
  return 0;
}

int run_validate_seeds(const std::vector<std::string>& correctness_files,
                       int inf_substitute, std::vector<double> fractions,
                       const std::string& out_dir, ManifestScope manifest) {
  if (correctness_files.size() < 2)
    fc::fail(fc::ErrorKind::parameter_error,
             "validate-seeds needs at least 2 correctness files");
  if (fractions.empty())
    fractions.assign(fc::removal::kDefaultCutFractions.begin(),
                     fc::removal::kDefaultCutFractions.end());

  const fs::path dir = prepare_output_dir(out_dir);
  std::vector<fc::validation::SeedRun> runs;
  json run_info = json::array();
  for (std::size_t i = 0; i < correctness_files.size(); ++i) {
    const auto matrix = fc::io::read_correctness_csv(correctness_files[i]);
    fc::validation::SeedRun run;
    run.seed = i;
    if (auto meta = fc::io::read_correctness_meta(correctness_files[i])) run.seed = meta->seed;
    run.profiles = fc::events::compute_profiles(matrix);
    run_info.push_back({{"file", correctness_files[i]}, {"seed", run.seed}});
    runs.push_back(std::move(run));
  }

  json j;
  j["inf_substitute"] = inf_substitute;
  j["runs"] = std::move(run_info);

  // pairwise Pearson over substituted forgetting counts
  std::vector<std::vector<double>> counts;
  counts.reserve(runs.size());
  for (const auto& run : runs)
    counts.push_back(fc::validation::substituted_counts(run, inf_substitute));
  json pearson_table = json::array();
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      pearson_table.push_back({{"seed_a", runs[a].seed},
                               {"seed_b", runs[b].seed},
                               {"r", fc::validation::pearson(counts[a], counts[b])}});
    }
  }
  j["pearson"] = std::move(pearson_table);

  // binned histogram of per-example stdevs
  const std::vector<double> stdev = fc::validation::cross_seed_stdev(runs, inf_substitute);
  double max_stdev = 0.0;
  for (double s : stdev) max_stdev = std::max(max_stdev, s);
  const double bin_width = 1.0;
  std::vector<std::size_t> histogram(static_cast<std::size_t>(max_stdev / bin_width) + 1, 0);
  for (double s : stdev) ++histogram[static_cast<std::size_t>(s / bin_width)];
  j["stdev_histogram"] = {{"bin_width", bin_width}, {"counts", histogram}};

  // removal-set overlap across seeds, against the random-draw expectation
  std::vector<fc::removal::RemovalSchedule> schedules;
  schedules.reserve(runs.size());
  for (const auto& run : runs)
    schedules.push_back(fc::removal::rank_for_removal(run.profiles));
  const std::size_t dataset = schedules.front().dataset_size;
  json overlap_curve = json::array();
  json expectation_curve = json::array();
  for (double f : fractions) {
    double mean_overlap = 0.0;
    std::size_t pairs = 0;
    std::size_t removed_count = 0;
    for (std::size_t a = 0; a < schedules.size(); ++a) {
      const auto set_a = fc::removal::take_fraction(schedules[a], f);
      removed_count = set_a.size();
      for (std::size_t b = a + 1; b < schedules.size(); ++b) {
        const auto set_b = fc::removal::take_fraction(schedules[b], f);
        if (set_a.empty()) continue;
        mean_overlap += fc::validation::removal_overlap(set_a, set_b);
        ++pairs;
      }
    }
    if (pairs == 0) continue;
    overlap_curve.push_back({{"fraction", f}, {"mean_overlap", mean_overlap / pairs}});
    const auto expectation = fc::validation::hypergeom_expected_overlap(
        static_cast<long long>(dataset), static_cast<long long>(removed_count),
        static_cast<long long>(removed_count));
    expectation_curve.push_back(
        {{"fraction", f}, {"expected_overlap", expectation.expected_fraction}});
  }
  j["overlap_curve"] = std::move(overlap_curve);
  j["hypergeom_expectation"] = std::move(expectation_curve);

  write_json(dir / "validation.json", j);
  manifest.dir = dir;
  for (const auto& file : correctness_files) manifest.inputs.push_back(file);
  manifest.write();
  return 0;
}

int run_report(const std::vector<std::string>& run_dirs, const std::string& out_dir,
               ManifestScope manifest) {
  const fs::path dir = prepare_output_dir(out_dir);

  struct Row {
    std::string name;
    std::string mode;
    double fraction = 0.0;
    std::uint64_t samples = 0;
    std::optional<double> top1, top2, sqrt_cjsd;
  };
  std::vector<Row> rows;
  for (const auto& run_dir : run_dirs) {
    const fs::path base(run_dir);
    Row row;
    const json info = json::parse(fc::io::read_text(base / "run.json"));
    row.name = info.value("name", base.filename().string());
    row.mode = info.value("mode", std::string{"unknown"});
    row.fraction = info.value("fraction", 0.0);
    row.samples = info.value("samples", std::uint64_t{0});
    if (fs::exists(base / "metrics.json")) {
      const json metrics = json::parse(fc::io::read_text(base / "metrics.json"));
      if (metrics.contains("top1")) row.top1 = metrics["top1"].get<double>();
      if (metrics.contains("top2")) row.top2 = metrics["top2"].get<double>();
      manifest.inputs.push_back(base / "metrics.json");
    }
    if (fs::exists(base / "cjsd.json")) {
      const json cjsd = json::parse(fc::io::read_text(base / "cjsd.json"));
      if (cjsd.contains("sqrt_cjsd_no_resolutions"))
        row.sqrt_cjsd = cjsd["sqrt_cjsd_no_resolutions"].get<double>();
      else if (cjsd.contains("sqrt_cjsd_all"))
        row.sqrt_cjsd = cjsd["sqrt_cjsd_all"].get<double>();
      manifest.inputs.push_back(base / "cjsd.json");
    }
    manifest.inputs.push_back(base / "run.json");
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.mode != b.mode) return a.mode < b.mode;
    return a.fraction < b.fraction;
  });

  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("NA");
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", *v);
    return std::string(buffer);
  };

  std::string table = "model,samples,top1,top2,sqrt_cjsd\n";
  for (const auto& row : rows) {
    table += row.name + "," + std::to_string(row.samples) + "," + cell(row.top1) + "," +
             cell(row.top2) + "," + cell(row.sqrt_cjsd) + "\n";
  }
  fc::io::write_text(dir / "table1.csv", table);

  std::string curves = "mode,fraction,top1,sqrt_cjsd\n";
  for (const auto& row : rows) {
    curves += row.mode + "," + format_pct(row.fraction) + "," + cell(row.top1) + "," +
              cell(row.sqrt_cjsd) + "\n";
  }
  fc::io::write_text(dir / "curves.csv", curves);

  manifest.dir = dir;
  manifest.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forgetting-event based dataset curation toolkit"};
  app.require_subcommand(1);
  const std::string command = join_command(argc, argv);

  int exit_code = 0;
  auto guard = [&](auto&& body) {
    return [&, body]() {
      try {
        exit_code = body();
      } catch (const fc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = 2;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = 2;
      }
    };
  };

  ManifestScope manifest;
  manifest.command = command;

  // preprocess
  {
    auto* cmd = app.add_subcommand("preprocess", "filter and normalize raw reactions");
    auto input = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>(".");
    auto output = std::make_shared<std::string>("filtered.jsonl");
    auto report = std::make_shared<std::string>("filter_report.json");
    cmd->add_option("--input", *input, "raw reactions JSONL")->required();
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->add_option("--output", *output, "filtered reactions filename");
    cmd->add_option("--report", *report, "filter report filename");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      return run_preprocess(*input, *out_dir, *output, *report, m);
    }));
  }

  // split
  {
    auto* cmd = app.add_subcommand("split", "product-exclusive train/valid/test split");
    auto input = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>(".");
    auto seed = std::make_shared<std::uint64_t>();
    auto fractions = std::make_shared<std::vector<double>>();
    cmd->add_option("--input", *input, "filtered reactions JSONL")->required();
    cmd->add_option("--seed", *seed, "shuffle seed")->required();
    cmd->add_option("--fractions", *fractions, "train,valid,test fractions")->expected(3);
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      m.parameters["seed"] = std::to_string(*seed);
      return run_split(*input, *seed, *fractions, *out_dir, m);
    }));
  }

  // train-toy
  {
    auto* cmd = app.add_subcommand("train-toy", "train the toy classifier and log per-epoch correctness");
    auto reactions = std::make_shared<std::string>();
    auto eval_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>(".");
    auto config = std::make_shared<fc::toy::ToyModelConfig>();
    auto topk = std::make_shared<int>(0);
    cmd->add_option("--reactions", *reactions, "training reactions JSONL")->required();
    cmd->add_option("--eval", *eval_path, "held-out reactions JSONL");
    cmd->add_option("--epochs", config->epochs, "training epochs");
    cmd->add_option("--lr", config->learning_rate, "learning rate");
    cmd->add_option("--batch", config->batch_size, "minibatch size");
    cmd->add_option("--feature-dim", config->feature_dim, "hashed feature space size");
    cmd->add_option("--l2", config->l2, "l2 penalty");
    cmd->add_option("--seed", config->seed, "training seed")->required();
    cmd->add_option("--topk", *topk, "also emit top-k predictions for the training set");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      m.parameters["seed"] = std::to_string(config->seed);
      m.parameters["epochs"] = std::to_string(config->epochs);
      return run_train_toy(*reactions, *eval_path, *config, *topk, *out_dir, m);
    }));
    cmd->add_option("--output-dir", *out_dir, "output directory");
  }

  // track
  {
    auto* cmd = app.add_subcommand("track", "turn a correctness matrix into forgetting profiles");
    auto correctness = std::make_shared<std::string>();
    auto reactions = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--correctness", *correctness, "correctness CSV")->required();
    cmd->add_option("--reactions", *reactions, "reactions JSONL for per-class histograms");
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      return run_track(*correctness, *reactions, *out_dir, m);
    }));
  }

  // rank
  {
    auto* cmd = app.add_subcommand("rank", "build the removal schedule from profiles");
    auto profiles = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--profiles", *profiles, "profiles CSV")->required();
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      return run_rank(*profiles, *out_dir, m);
    }));
  }

  // clean
  {
    auto* cmd = app.add_subcommand("clean", "remove the top fraction of the schedule");
    auto fraction = std::make_shared<double>();
    auto schedule = std::make_shared<std::string>();
    auto reactions = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--fraction", *fraction, "fraction of the full training set")->required();
    cmd->add_option("--schedule", *schedule, "schedule JSON")->required();
    cmd->add_option("--reactions", *reactions, "reactions JSONL")->required();
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      m.parameters["fraction"] = format_pct(*fraction) + "%";
      return run_clean(*fraction, *schedule, *reactions, *out_dir, m);
    }));
  }

  // null-sample
  {
    auto* cmd = app.add_subcommand("null-sample", "random or class-restricted removal baseline");
    auto mode = std::make_shared<std::string>("random");
    auto fraction = std::make_shared<double>();
    auto seed = std::make_shared<std::uint64_t>();
    auto reactions = std::make_shared<std::string>();
    auto class_id = std::make_shared<int>(0);
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--mode", *mode, "random | class0")
        ->check(CLI::IsMember({"random", "class0"}));
    cmd->add_option("--fraction", *fraction, "fraction of the full set")->required();
    cmd->add_option("--seed", *seed, "sampling seed")->required();
    cmd->add_option("--reactions", *reactions, "reactions JSONL")->required();
    cmd->add_option("--class-id", *class_id, "superclass for class-restricted mode");
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      m.parameters["seed"] = std::to_string(*seed);
      m.parameters["mode"] = *mode;
      return run_null_sample(*mode, *fraction, *seed, *reactions, *class_id, *out_dir, m);
    }));
  }

  // inject-noise
  {
    auto* cmd = app.add_subcommand("inject-noise", "inject artificial label noise");
    auto reactions = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("shuffle");
    auto subset_fraction = std::make_shared<double>(0.05);
    auto subset_ids = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>();
    auto predictions = std::make_shared<std::string>();
    auto k = std::make_shared<int>(3);
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--reactions", *reactions, "reactions JSONL")->required();
    cmd->add_option("--mode", *mode, "shuffle | topk")
        ->check(CLI::IsMember({"shuffle", "topk"}));
    cmd->add_option("--subset-fraction", *subset_fraction, "designated subset size");
    cmd->add_option("--subset-ids", *subset_ids, "explicit subset id file");
    cmd->add_option("--seed", *seed, "noise seed")->required();
    cmd->add_option("--predictions", *predictions, "ranked predictions JSONL (topk mode)");
    cmd->add_option("--k", *k, "candidate rank used for substitution");
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      m.parameters["seed"] = std::to_string(*seed);
      m.parameters["mode"] = *mode;
      return run_inject_noise(*reactions, *mode, *subset_fraction, *subset_ids, *seed,
                              *predictions, *k, *out_dir, m);
    }));
  }

  // metrics
  {
    auto* cmd = app.add_subcommand("metrics", "top-n / round-trip / coverage / diversity / Wilson");
    auto predictions = std::make_shared<std::string>();
    auto truths = std::make_shared<std::string>();
    auto topn = std::make_shared<std::vector<int>>();
    auto z = std::make_shared<double>(1.96);
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--predictions", *predictions, "predictions JSONL")->required();
    cmd->add_option("--truths", *truths, "reactions JSONL with true products")->required();
    cmd->add_option("--topn", *topn, "n values for top-n accuracy");
    cmd->add_option("--z", *z, "Wilson z value");
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      return run_metrics(*predictions, *truths, *topn, *z, *out_dir, m);
    }));
  }

  // cjsd
  {
    auto* cmd = app.add_subcommand("cjsd", "per-class confidence CDFs and the CJSD metric");
    auto confidences = std::make_shared<std::string>();
    auto bins = std::make_shared<int>(fc::likelihood::kDefaultBins);
    auto exclude = std::make_shared<int>(fc::reaction::kResolutionsClass);
    auto coefficient = std::make_shared<double>(-1.0);
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--confidences", *confidences, "confidence CSV")->required();
    cmd->add_option("--bins", *bins, "CDF bins");
    cmd->add_option("--exclude-class", *exclude, "class excluded from the second CJSD");
    cmd->add_option("--coefficient", *coefficient,
                    "averaging coefficient (default: 1/M)");
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      std::optional<double> coeff;
      if (*coefficient > 0.0) coeff = *coefficient;
      return run_cjsd(*confidences, *bins, *exclude, coeff, *out_dir, m);
    }));
  }

  // validate-seeds
  {
    auto* cmd = app.add_subcommand("validate-seeds", "cross-seed stability analysis");
    auto files = std::make_shared<std::vector<std::string>>();
    auto inf_substitute = std::make_shared<int>(fc::validation::kDefaultInfSubstitute);
    auto fractions = std::make_shared<std::vector<double>>();
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--correctness", *files, "correctness CSVs (>= 2)")->required();
    cmd->add_option("--inf-substitute", *inf_substitute,
                    "numeric stand-in for never-learnt counts");
    cmd->add_option("--fractions", *fractions, "overlap curve fractions");
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      m.parameters["inf_substitute"] = std::to_string(*inf_substitute);
      return run_validate_seeds(*files, *inf_substitute, *fractions, *out_dir, m);
    }));
  }

  // report
  {
    auto* cmd = app.add_subcommand("report", "aggregate run outputs into CSV tables");
    auto runs = std::make_shared<std::vector<std::string>>();
    auto out_dir = std::make_shared<std::string>(".");
    cmd->add_option("--run", *runs, "run directories with run.json")->required();
    cmd->add_option("--output-dir", *out_dir, "output directory");
    cmd->callback(guard([=] {
      ManifestScope m = manifest;
      return run_report(*runs, *out_dir, m);
    }));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 1;
  }
  return exit_code;
}
