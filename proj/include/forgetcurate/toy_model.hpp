#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forgetcurate/events.hpp"
#include "forgetcurate/likelihood.hpp"
#include "forgetcurate/reaction.hpp"

namespace forgetcurate::toy {

// Desk-scale stand-in for the sequence model: a softmax-linear classifier
// over hashed token features predicting the product out of a closed
// vocabulary. Its only job is to produce realistic per-epoch correctness
// matrices and final confidences, bit-reproducibly.
struct ToyModelConfig {
  std::size_t feature_dim = std::size_t{1} << 16;
  int epochs = 34;
  double learning_rate = 0.1;
  int batch_size = 64;
  std::uint64_t seed = 0;
  double l2 = 1e-5;
};

// Hashed unigram + bigram token counts, folded into feature_dim buckets with
// FNV-1a 64. Entries are sorted by index with duplicate buckets merged.
struct SparseFeatures {
  std::vector<std::pair<std::uint32_t, double>> items;
};

// Throws Error(empty_input) on an empty token list.
SparseFeatures featurize(std::span<const std::string> tokens, std::size_t feature_dim);

struct ToyExample {
  std::int64_t id = 0;
  std::vector<std::string> tokens;
  int label = -1;  // -1: product outside the training vocabulary
  int superclass = 0;
};

struct ToyTask {
  std::vector<ToyExample> examples;
  int num_classes = 0;
};

// Closed product vocabulary, labels assigned in sorted product order.
struct ToyVocabulary {
  std::vector<std::string> products;
  std::unordered_map<std::string, int> index;
};

ToyVocabulary build_vocabulary(std::span<const reaction::ReactionRecord> records);

// Tokens come from the precursor side of the normalized reaction string;
// labels from the vocabulary (-1 when the product is unseen).
ToyTask make_task(std::span<const reaction::ReactionRecord> records,
                  const ToyVocabulary& vocabulary);

class ToyModel {
 public:
  ToyModel(std::size_t feature_dim, int num_classes);

  std::size_t feature_dim() const { return feature_dim_; }
  int num_classes() const { return num_classes_; }

  std::vector<double> logits(const SparseFeatures& x) const;
  std::vector<double> probabilities(const SparseFeatures& x) const;
  // argmax with ties broken by the lowest label id
  int predict(const SparseFeatures& x) const;

  // Labels ranked by descending probability, ties by ascending label.
  // Throws Error(k_too_large) when k exceeds the vocabulary.
  std::vector<std::pair<int, double>> predict_topk(std::span<const std::string> tokens,
                                                   int k) const;

  double weight(std::size_t feature, int cls) const;
  double bias(int cls) const { return bias_[static_cast<std::size_t>(cls)]; }

 private:
  friend struct Trainer;
  friend double loss_and_gradient(const ToyModel&, std::span<const SparseFeatures>,
                                  std::span<const int>, double, std::vector<double>&,
                                  std::vector<double>&);
  friend void nudge_weight(ToyModel&, std::size_t, int, double);
  friend void nudge_bias(ToyModel&, int, double);

  std::size_t feature_dim_;
  int num_classes_;
  std::vector<double> weights_;  // [feature][class], scaled lazily
  std::vector<double> bias_;
  double weight_scale_ = 1.0;  // multiplicative L2 decay folded in lazily
};

struct TrainResult {
  events::CorrectnessMatrix matrix;
  std::vector<likelihood::ConfidenceRecord> train_confidences;
  ToyModel model;
};

// Seeded minibatch SGD on softmax cross-entropy. After every epoch each
// training example is scored (top-1 == truth) into a matrix column; after
// the final epoch the top-1 softmax probability of every training example is
// emitted as its confidence. Fixed iteration and summation order make the
// result byte-identical for a given config. Throws Error(degenerate_task)
// when fewer than 2 classes exist.
TrainResult train_and_track(const ToyTask& task, const ToyModelConfig& config);

// Confidence records for a frozen model.
std::vector<likelihood::ConfidenceRecord> evaluate(
    const ToyModel& model, std::span<const ToyExample> examples);

double top1_accuracy(const ToyModel& model, std::span<const ToyExample> examples);

// Full-batch loss (mean cross-entropy + l2/2 * ||W||^2) and its gradient
// with respect to the stored parameters. Backs the finite-difference check.
double loss_and_gradient(const ToyModel& model, std::span<const SparseFeatures> inputs,
                         std::span<const int> labels, double l2,
                         std::vector<double>& grad_weights,
                         std::vector<double>& grad_bias);

// Test hooks for finite differences.
void nudge_weight(ToyModel& model, std::size_t feature, int cls, double delta);
void nudge_bias(ToyModel& model, int cls, double delta);

}  // namespace forgetcurate::toy
