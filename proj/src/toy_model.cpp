#include "forgetcurate/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/kernels.hpp"
#include "forgetcurate/rng.hpp"
#include "forgetcurate/runtime.hpp"

namespace forgetcurate::toy {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint32_t fold(std::uint64_t h, std::size_t dim) {
  return static_cast<std::uint32_t>(h % dim);
}

void validate_config(const ToyModelConfig& config) {
  if (config.feature_dim == 0 || config.epochs < 1 || config.learning_rate <= 0.0 ||
      config.batch_size < 1 || config.l2 < 0.0)
    fail(ErrorKind::parameter_error, "invalid toy model configuration");
}

}  // namespace

SparseFeatures featurize(std::span<const std::string> tokens, std::size_t feature_dim) {
  if (tokens.empty()) fail(ErrorKind::empty_input, "cannot featurize an empty token list");
  std::vector<std::uint32_t> buckets;
  buckets.reserve(tokens.size() * 2);
  for (const auto& token : tokens) buckets.push_back(fold(fnv1a(kFnvOffset, token), feature_dim));
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    std::uint64_t h = fnv1a(kFnvOffset, tokens[i]);
    h ^= 0x1f;  // separator byte between the bigram halves
    h *= kFnvPrime;
    h = fnv1a(h, tokens[i + 1]);
    buckets.push_back(fold(h, feature_dim));
  }
  std::sort(buckets.begin(), buckets.end());
  SparseFeatures features;
  features.items.reserve(buckets.size());
  for (std::size_t i = 0; i < buckets.size();) {
    std::size_t j = i;
    while (j < buckets.size() && buckets[j] == buckets[i]) ++j;
    features.items.emplace_back(buckets[i], static_cast<double>(j - i));
    i = j;
  }
  return features;
}

ToyVocabulary build_vocabulary(std::span<const reaction::ReactionRecord> records) {
  ToyVocabulary vocabulary;
  for (const auto& record : records) vocabulary.products.push_back(record.product);
  std::sort(vocabulary.products.begin(), vocabulary.products.end());
  vocabulary.products.erase(
      std::unique(vocabulary.products.begin(), vocabulary.products.end()),
      vocabulary.products.end());
  vocabulary.index.reserve(vocabulary.products.size());
  for (std::size_t i = 0; i < vocabulary.products.size(); ++i)
    vocabulary.index.emplace(vocabulary.products[i], static_cast<int>(i));
  return vocabulary;
}

ToyTask make_task(std::span<const reaction::ReactionRecord> records,
                  const ToyVocabulary& vocabulary) {
  ToyTask task;
  task.num_classes = static_cast<int>(vocabulary.products.size());
  task.examples.reserve(records.size());
  for (const auto& record : records) {
    ToyExample example;
    example.id = record.id;
    example.superclass = record.superclass;
    std::string source;
    for (std::size_t i = 0; i < record.precursors.size(); ++i) {
      if (i > 0) source += '.';
      source += record.precursors[i];
    }
    example.tokens = reaction::tokenize_smiles(source).source_tokens;
    auto it = vocabulary.index.find(record.product);
    example.label = it == vocabulary.index.end() ? -1 : it->second;
    task.examples.push_back(std::move(example));
  }
  return task;
}

ToyModel::ToyModel(std::size_t feature_dim, int num_classes)
    : feature_dim_(feature_dim),
      num_classes_(num_classes),
      weights_(feature_dim * static_cast<std::size_t>(num_classes), 0.0),
      bias_(static_cast<std::size_t>(num_classes), 0.0) {}

std::vector<double> ToyModel::logits(const SparseFeatures& x) const {
  const std::size_t c = static_cast<std::size_t>(num_classes_);
  std::vector<double> out(c, 0.0);
  for (const auto& [feature, value] : x.items) {
    std::span<const double> row(weights_.data() + static_cast<std::size_t>(feature) * c, c);
    kernels::axpy(value, row, out);
  }
  kernels::scale(out, weight_scale_);
  kernels::axpy(1.0, bias_, out);
  return out;
}

std::vector<double> ToyModel::probabilities(const SparseFeatures& x) const {
  std::vector<double> p = logits(x);
  const double m = kernels::max_value(p);
  for (double& v : p) v = std::exp(v - m);
  const double z = kernels::sum(p);
  kernels::scale(p, 1.0 / z);
  return p;
}

int ToyModel::predict(const SparseFeatures& x) const {
  const std::vector<double> l = logits(x);
  int best = 0;
  for (int c = 1; c < num_classes_; ++c) {
    if (l[static_cast<std::size_t>(c)] > l[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

std::vector<std::pair<int, double>> ToyModel::predict_topk(
    std::span<const std::string> tokens, int k) const {
  if (k < 1 || k > num_classes_)
    fail(ErrorKind::k_too_large,
         "k = " + std::to_string(k) + " with " + std::to_string(num_classes_) + " classes");
  const std::vector<double> p = probabilities(featurize(tokens, feature_dim_));
  std::vector<std::pair<int, double>> ranked;
  ranked.reserve(static_cast<std::size_t>(num_classes_));
  for (int c = 0; c < num_classes_; ++c)
    ranked.emplace_back(c, p[static_cast<std::size_t>(c)]);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  ranked.resize(static_cast<std::size_t>(k));
  return ranked;
}

double ToyModel::weight(std::size_t feature, int cls) const {
  return weight_scale_ *
         weights_[feature * static_cast<std::size_t>(num_classes_) +
                  static_cast<std::size_t>(cls)];
}

namespace {

struct PreparedExample {
  SparseFeatures features;
  int label = -1;
};

}  // namespace

struct Trainer {
  const ToyTask& task;
  const ToyModelConfig& config;
  ToyModel model;
  std::vector<PreparedExample> prepared;

  Trainer(const ToyTask& t, const ToyModelConfig& c)
      : task(t), config(c), model(c.feature_dim, t.num_classes) {
    prepared.resize(task.examples.size());
    runtime::parallel_for(task.examples.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        prepared[i].features = featurize(task.examples[i].tokens, config.feature_dim);
        prepared[i].label = task.examples[i].label;
      }
    });
  }

  void apply_batch(std::span<const std::size_t> batch) {
    const std::size_t c = static_cast<std::size_t>(model.num_classes_);
    const double inv_batch = 1.0 / static_cast<double>(batch.size());

    // forward pass for the whole batch under the pre-update parameters
    std::vector<std::vector<double>> grads(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const PreparedExample& ex = prepared[batch[b]];
      grads[b] = model.probabilities(ex.features);
      if (ex.label >= 0) grads[b][static_cast<std::size_t>(ex.label)] -= 1.0;
    }

    std::vector<double> bias_grad(c, 0.0);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const PreparedExample& ex = prepared[batch[b]];
      const double step = -config.learning_rate * inv_batch / model.weight_scale_;
      for (const auto& [feature, value] : ex.features.items) {
        std::span<double> row(model.weights_.data() + static_cast<std::size_t>(feature) * c,
                              c);
        kernels::axpy(step * value, grads[b], row);
      }
      kernels::axpy(1.0, grads[b], bias_grad);
    }
    kernels::axpy(-config.learning_rate * inv_batch, bias_grad, model.bias_);

    // multiplicative weight decay, folded into the lazy scale
    model.weight_scale_ *= 1.0 - config.learning_rate * config.l2;
  }

  void score_epoch(std::vector<std::uint8_t>& column) const {
    runtime::parallel_for(prepared.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        column[i] =
            prepared[i].label >= 0 && model.predict(prepared[i].features) == prepared[i].label
                ? 1
                : 0;
      }
    });
  }
};

TrainResult train_and_track(const ToyTask& task, const ToyModelConfig& config) {
  validate_config(config);
  if (task.num_classes < 2)
    fail(ErrorKind::degenerate_task, "training needs at least 2 classes");
  if (task.examples.empty())
    fail(ErrorKind::degenerate_task, "training needs at least 1 example");
  for (const auto& example : task.examples) {
    if (example.label < 0 || example.label >= task.num_classes)
      fail(ErrorKind::parameter_error,
           "training example " + std::to_string(example.id) +
               " has a label outside the vocabulary");
  }

  Trainer trainer(task, config);
  const std::size_t n = task.examples.size();
  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::uint8_t> values(n * static_cast<std::size_t>(config.epochs));
  std::vector<std::uint8_t> column(n);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(config.batch_size));
      trainer.apply_batch(std::span<const std::size_t>(order.data() + start, stop - start));
    }
    trainer.score_epoch(column);
    for (std::size_t i = 0; i < n; ++i)
      values[i * static_cast<std::size_t>(config.epochs) + static_cast<std::size_t>(epoch)] =
          column[i];
  }

  std::vector<std::int64_t> ids;
  ids.reserve(n);
  for (const auto& example : task.examples) ids.push_back(example.id);

  TrainResult result{
      events::CorrectnessMatrix(std::move(ids), static_cast<std::size_t>(config.epochs),
                                std::move(values), events::MatrixKind::forward),
      evaluate(trainer.model, task.examples), std::move(trainer.model)};
  return result;
}

std::vector<likelihood::ConfidenceRecord> evaluate(
    const ToyModel& model, std::span<const ToyExample> examples) {
  std::vector<likelihood::ConfidenceRecord> records(examples.size());
  runtime::parallel_for(examples.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& example = examples[i];
      const std::vector<double> p =
          model.probabilities(featurize(example.tokens, model.feature_dim()));
      int best = 0;
      for (int c = 1; c < model.num_classes(); ++c) {
        if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(best)]) best = c;
      }
      records[i] = likelihood::ConfidenceRecord{
          example.id, example.superclass, p[static_cast<std::size_t>(best)],
          example.label >= 0 && best == example.label};
    }
  });
  return records;
}

double top1_accuracy(const ToyModel& model, std::span<const ToyExample> examples) {
  if (examples.empty()) fail(ErrorKind::empty_sample, "no examples to evaluate");
  const std::vector<likelihood::ConfidenceRecord> records = evaluate(model, examples);
  std::size_t hits = 0;
  for (const auto& r : records) hits += r.correct ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

double loss_and_gradient(const ToyModel& model, std::span<const SparseFeatures> inputs,
                         std::span<const int> labels, double l2,
                         std::vector<double>& grad_weights, std::vector<double>& grad_bias) {
  if (inputs.size() != labels.size())
    fail(ErrorKind::size_mismatch, "inputs and labels must align");
  if (inputs.empty()) fail(ErrorKind::empty_sample, "loss over an empty batch");
  const std::size_t c = static_cast<std::size_t>(model.num_classes_);
  grad_weights.assign(model.weights_.size(), 0.0);
  grad_bias.assign(c, 0.0);

  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::vector<double> p = model.probabilities(inputs[i]);
    const std::size_t label = static_cast<std::size_t>(labels[i]);
    loss -= std::log(std::max(p[label], 1e-300)) * inv_n;
    p[label] -= 1.0;
    // d logits / d raw weight carries the lazy scale
    for (const auto& [feature, value] : inputs[i].items) {
      std::span<double> row(grad_weights.data() + static_cast<std::size_t>(feature) * c, c);
      kernels::axpy(inv_n * value * model.weight_scale_, p, row);
    }
    kernels::axpy(inv_n, p, grad_bias);
  }

  if (l2 > 0.0) {
    const double s2 = model.weight_scale_ * model.weight_scale_;
    double norm2 = kernels::dot(model.weights_, model.weights_);
    loss += 0.5 * l2 * s2 * norm2;
    kernels::axpy(l2 * s2, model.weights_, grad_weights);
  }
  return loss;
}

void nudge_weight(ToyModel& model, std::size_t feature, int cls, double delta) {
  model.weights_[feature * static_cast<std::size_t>(model.num_classes_) +
                 static_cast<std::size_t>(cls)] += delta;
}

void nudge_bias(ToyModel& model, int cls, double delta) {
  model.bias_[static_cast<std::size_t>(cls)] += delta;
}

}  // namespace forgetcurate::toy
