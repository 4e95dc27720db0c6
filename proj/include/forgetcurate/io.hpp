#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forgetcurate/eval.hpp"
#include "forgetcurate/events.hpp"
#include "forgetcurate/likelihood.hpp"
#include "forgetcurate/reaction.hpp"
#include "forgetcurate/removal.hpp"

namespace forgetcurate::io {

// ---- reactions (JSON Lines: {"id", "rxn", "class", "class_name"}) ----

std::vector<reaction::RawReaction> read_raw_reactions(const std::filesystem::path& path);
std::vector<reaction::ReactionRecord> read_reactions(const std::filesystem::path& path);
void write_reactions(const std::filesystem::path& path,
                     std::span<const reaction::ReactionRecord> records);

void write_filter_report(const std::filesystem::path& path,
                         const reaction::FilterReport& report);

// ---- correctness matrix (CSV: example_id,epoch_0..epoch_{T-1}) ----

struct CorrectnessMeta {
  events::MatrixKind kind = events::MatrixKind::forward;
  std::string model;
  std::uint64_t seed = 0;
};

void write_correctness_csv(const std::filesystem::path& path,
                           const events::CorrectnessMatrix& matrix);
// Sidecar JSON written next to the CSV as <path>.meta.json.
void write_correctness_meta(const std::filesystem::path& csv_path,
                            const CorrectnessMeta& meta);
events::CorrectnessMatrix read_correctness_csv(const std::filesystem::path& path);
std::optional<CorrectnessMeta> read_correctness_meta(const std::filesystem::path& csv_path);

// ---- forgetting profiles (CSV; never-learnt rows carry "inf") ----

void write_profiles_csv(const std::filesystem::path& path,
                        std::span<const events::ForgettingProfile> profiles);
std::vector<events::ForgettingProfile> read_profiles_csv(const std::filesystem::path& path);

// ---- confidences (CSV: example_id,superclass,confidence,correct) ----

void write_confidences_csv(const std::filesystem::path& path,
                           std::span<const likelihood::ConfidenceRecord> records);
std::vector<likelihood::ConfidenceRecord> read_confidences_csv(
    const std::filesystem::path& path);

// ---- removal schedules and id sets ----

void write_schedule_json(const std::filesystem::path& path,
                         const removal::RemovalSchedule& schedule);
removal::RemovalSchedule read_schedule_json(const std::filesystem::path& path);

void write_ids(const std::filesystem::path& path, std::span<const std::int64_t> ids);
std::vector<std::int64_t> read_ids(const std::filesystem::path& path);

// ---- predictions (JSON Lines: {"target_id", "candidates": [...]}) ----

std::vector<eval::PredictionSet> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path,
                       std::span<const eval::PredictionSet> sets);

// ---- generic helpers ----

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// FNV-1a 64 over the file bytes; provenance hash for manifests.
std::string file_fingerprint(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;
  std::uint64_t bytes = 0;
  std::string fingerprint;
};

// manifest.json for one experiment directory: tool version, the exact
// command, seeds, and input fingerprints. Deliberately timestamp-free so
// reruns are byte-identical.
void write_manifest(const std::filesystem::path& directory, const std::string& command,
                    const std::map<std::string, std::string>& parameters,
                    std::span<const std::filesystem::path> inputs);

}  // namespace forgetcurate::io
