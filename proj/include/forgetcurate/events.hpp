#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace forgetcurate::events {

enum class MatrixKind { forward, round_trip };

const char* matrix_kind_name(MatrixKind kind);
MatrixKind matrix_kind_from_name(std::string_view name);

// examples x epochs binary accuracy table. Row i, epoch t holds acc_i^t.
class CorrectnessMatrix {
 public:
  // Throws Error(shape_error) on ragged rows, zero epochs, or entries
  // outside {0,1}.
  static CorrectnessMatrix from_rows(std::vector<std::int64_t> example_ids,
                                     const std::vector<std::vector<std::uint8_t>>& rows,
                                     MatrixKind kind);

  CorrectnessMatrix(std::vector<std::int64_t> example_ids, std::size_t epochs,
                    std::vector<std::uint8_t> values, MatrixKind kind);

  std::size_t rows() const { return example_ids_.size(); }
  std::size_t epochs() const { return epochs_; }
  MatrixKind kind() const { return kind_; }
  const std::vector<std::int64_t>& example_ids() const { return example_ids_; }
  std::span<const std::uint8_t> row(std::size_t i) const;
  const std::vector<std::uint8_t>& values() const { return values_; }

 private:
  std::vector<std::int64_t> example_ids_;
  std::size_t epochs_;
  std::vector<std::uint8_t> values_;  // row-major
  MatrixKind kind_;
};

// Per-example event counts. A row that is never correct carries the
// NeverLearnt marker (nominally infinite forgetting count): learnt_ever is
// false and n_forgetting is meaningless; use forgetting_or() where a numeric
// substitute is wanted.
struct ForgettingProfile {
  std::int64_t example_id = 0;
  bool learnt_ever = false;
  int n_forgetting = 0;
  int n_learning = 0;
  bool never_forgotten = false;
  std::uint8_t final_state = 0;

  bool never_learnt() const { return !learnt_ever; }
  int forgetting_or(int inf_substitute) const {
    return learnt_ever ? n_forgetting : inf_substitute;
  }
};

// Counts transitions between consecutive epochs: forgetting when acc drops
// 1 -> 0, learning when it rises 0 -> 1. Epoch 0 contributes no event.
std::vector<ForgettingProfile> compute_profiles(const CorrectnessMatrix& matrix);

// Histogram over finite forgetting counts, learnt examples only; the
// learnt / never-learnt split is reported separately.
struct ProfileHistogram {
  std::map<int, std::size_t> counts;
  std::size_t learnt = 0;
  std::size_t never_learnt = 0;

  double learnt_fraction() const {
    std::size_t total = learnt + never_learnt;
    return total == 0 ? 0.0 : static_cast<double>(learnt) / static_cast<double>(total);
  }
};

ProfileHistogram profile_histogram(std::span<const ForgettingProfile> profiles);

// Per-superclass histograms; examples missing from class_of go to class -1.
std::map<int, ProfileHistogram> profile_histogram_by_class(
    std::span<const ForgettingProfile> profiles,
    const std::map<std::int64_t, int>& class_of);

}  // namespace forgetcurate::events
