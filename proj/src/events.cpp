#include "forgetcurate/events.hpp"

#include <string>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/runtime.hpp"

namespace forgetcurate::events {

const char* matrix_kind_name(MatrixKind kind) {
  return kind == MatrixKind::forward ? "forward" : "round_trip";
}

MatrixKind matrix_kind_from_name(std::string_view name) {
  if (name == "forward") return MatrixKind::forward;
  if (name == "round_trip") return MatrixKind::round_trip;
  fail(ErrorKind::parameter_error, "unknown matrix kind: " + std::string(name));
}

CorrectnessMatrix::CorrectnessMatrix(std::vector<std::int64_t> example_ids,
                                     std::size_t epochs,
                                     std::vector<std::uint8_t> values,
                                     MatrixKind kind)
    : example_ids_(std::move(example_ids)),
      epochs_(epochs),
      values_(std::move(values)),
      kind_(kind) {
  if (epochs_ == 0) fail(ErrorKind::shape_error, "matrix needs at least one epoch");
  if (values_.size() != example_ids_.size() * epochs_)
    fail(ErrorKind::shape_error, "value buffer does not match rows x epochs");
  for (std::uint8_t v : values_) {
    if (v > 1) fail(ErrorKind::shape_error, "matrix entries must be 0 or 1");
  }
}

CorrectnessMatrix CorrectnessMatrix::from_rows(
    std::vector<std::int64_t> example_ids,
    const std::vector<std::vector<std::uint8_t>>& rows, MatrixKind kind) {
  if (example_ids.size() != rows.size())
    fail(ErrorKind::shape_error, "id count does not match row count");
  if (rows.empty()) fail(ErrorKind::shape_error, "matrix needs at least one row");
  const std::size_t epochs = rows.front().size();
  std::vector<std::uint8_t> values;
  values.reserve(rows.size() * epochs);
  for (const auto& row : rows) {
    if (row.size() != epochs)
      fail(ErrorKind::shape_error,
           "ragged matrix: expected " + std::to_string(epochs) + " epochs, got " +
               std::to_string(row.size()));
    values.insert(values.end(), row.begin(), row.end());
  }
  return CorrectnessMatrix(std::move(example_ids), epochs, std::move(values), kind);
}

std::span<const std::uint8_t> CorrectnessMatrix::row(std::size_t i) const {
  return std::span<const std::uint8_t>(values_.data() + i * epochs_, epochs_);
}

std::vector<ForgettingProfile> compute_profiles(const CorrectnessMatrix& matrix) {
  std::vector<ForgettingProfile> profiles(matrix.rows());
  runtime::parallel_for(matrix.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = matrix.row(i);
      ForgettingProfile& p = profiles[i];
      p.example_id = matrix.example_ids()[i];
      p.learnt_ever = row[0] != 0;
      for (std::size_t t = 1; t < row.size(); ++t) {
        if (row[t] > row[t - 1]) ++p.n_learning;
        if (row[t] < row[t - 1]) ++p.n_forgetting;
        if (row[t] != 0) p.learnt_ever = true;
      }
      p.final_state = row[row.size() - 1];
      if (!p.learnt_ever) {
        p.n_forgetting = 0;  // meaningless; marker is learnt_ever == false
        p.never_forgotten = false;
      } else {
        p.never_forgotten = p.n_forgetting == 0;
      }
    }
  });
  return profiles;
}

ProfileHistogram profile_histogram(std::span<const ForgettingProfile> profiles) {
  ProfileHistogram hist;
  for (const auto& p : profiles) {
    if (p.never_learnt()) {
      ++hist.never_learnt;
    } else {
      ++hist.learnt;
      ++hist.counts[p.n_forgetting];
    }
  }
  return hist;
}

std::map<int, ProfileHistogram> profile_histogram_by_class(
    std::span<const ForgettingProfile> profiles,
    const std::map<std::int64_t, int>& class_of) {
  std::map<int, ProfileHistogram> result;
  for (const auto& p : profiles) {
    auto it = class_of.find(p.example_id);
    const int cls = it == class_of.end() ? -1 : it->second;
    ProfileHistogram& hist = result[cls];
    if (p.never_learnt()) {
      ++hist.never_learnt;
    } else {
      ++hist.learnt;
      ++hist.counts[p.n_forgetting];
    }
  }
  return result;
}

}  // namespace forgetcurate::events
