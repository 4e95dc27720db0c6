#include "forgetcurate/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "forgetcurate/errors.hpp"

namespace forgetcurate::likelihood {

namespace {

std::vector<double> uniform_edges(int bins) {
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k)
    edges[static_cast<std::size_t>(k)] = static_cast<double>(k) / bins;
  return edges;
}

EmpiricalCDF cdf_from_counts(std::vector<std::size_t> counts, std::size_t total, int bins) {
  EmpiricalCDF cdf;
  cdf.bins = bins;
  cdf.edges = uniform_edges(bins);
  cdf.values.resize(static_cast<std::size_t>(bins));
  std::size_t running = 0;
  for (int k = 0; k < bins; ++k) {
    running += counts[static_cast<std::size_t>(k)];
    cdf.values[static_cast<std::size_t>(k)] =
        static_cast<double>(running) / static_cast<double>(total);
  }
  cdf.sample_count = total;
  return cdf;
}

std::size_t bin_of(double confidence, int bins) {
  auto k = static_cast<long>(std::floor(confidence * bins));
  if (k < 0) k = 0;
  if (k >= bins) k = bins - 1;  // folds c == 1 into the last bin
  return static_cast<std::size_t>(k);
}

// Sum in ascending value order: canonical regardless of input permutation.
double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace

EmpiricalCDF build_cdf(std::span<const ConfidenceRecord> records, int superclass,
                       int bins) {
  if (bins <= 0) fail(ErrorKind::parameter_error, "bin count must be positive");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  std::size_t total = 0;
  for (const auto& record : records) {
    if (record.superclass != superclass || !record.correct) continue;
    if (record.confidence < 0.0 || record.confidence > 1.0)
      fail(ErrorKind::parameter_error,
           "confidence outside [0, 1] for example " + std::to_string(record.example_id));
    ++counts[bin_of(record.confidence, bins)];
    ++total;
  }
  if (total == 0)
    fail(ErrorKind::empty_class,
         "no correct records for superclass " + std::to_string(superclass));
  EmpiricalCDF cdf = cdf_from_counts(std::move(counts), total, bins);
  cdf.superclass = superclass;
  return cdf;
}

EmpiricalCDF build_cdf_from_values(std::span<const double> confidences, int bins) {
  if (bins <= 0) fail(ErrorKind::parameter_error, "bin count must be positive");
  if (confidences.empty()) fail(ErrorKind::empty_class, "no confidence values");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double c : confidences) {
    if (c < 0.0 || c > 1.0)
      fail(ErrorKind::parameter_error, "confidence outside [0, 1]");
    ++counts[bin_of(c, bins)];
  }
  return cdf_from_counts(std::move(counts), confidences.size(), bins);
}

ClassCdfs build_class_cdfs(std::span<const ConfidenceRecord> records, int bins) {
  std::set<int> classes;
  for (const auto& record : records) classes.insert(record.superclass);
  ClassCdfs out;
  for (int cls : classes) {
    try {
      out.cdfs.push_back(build_cdf(records, cls, bins));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::empty_class) throw;
      out.skipped_classes.push_back(cls);
    }
  }
  return out;
}

double gcre(const EmpiricalCDF& cdf) {
  const double dx = 1.0 / cdf.bins;
  double acc = 0.0;
  for (double f : cdf.values) {
    const double survival = 1.0 - f;
    if (survival > 0.0) acc -= survival * std::log(survival);
  }
  return acc * dx;
}

double cjsd(std::span<const EmpiricalCDF> cdfs, const CjsdOptions& options) {
  std::vector<const EmpiricalCDF*> included;
  for (const auto& cdf : cdfs) {
    if (options.exclude_class && cdf.superclass == *options.exclude_class) continue;
    included.push_back(&cdf);
  }
  if (included.size() < 2)
    fail(ErrorKind::not_enough_distributions,
         "cjsd needs at least 2 distributions, got " + std::to_string(included.size()));
  const int bins = included.front()->bins;
  for (const auto* cdf : included) {
    if (cdf->bins != bins)
      fail(ErrorKind::bin_mismatch, "all CDFs must share the same binning");
  }

  const std::size_t m = included.size();
  EmpiricalCDF mixture;
  mixture.bins = bins;
  mixture.edges = included.front()->edges;
  mixture.values.resize(static_cast<std::size_t>(bins));
  std::vector<double> column(m);
  for (int k = 0; k < bins; ++k) {
    for (std::size_t i = 0; i < m; ++i)
      column[i] = included[i]->values[static_cast<std::size_t>(k)];
    mixture.values[static_cast<std::size_t>(k)] =
        sorted_sum(column) / static_cast<double>(m);
  }
  mixture.sample_count = 1;  // synthetic; only values matter here

  std::vector<double> component_gcres(m);
  for (std::size_t i = 0; i < m; ++i) component_gcres[i] = gcre(*included[i]);
  const double coefficient = options.averaging_coefficient
                                 ? *options.averaging_coefficient
                                 : 1.0 / static_cast<double>(m);
  return gcre(mixture) - coefficient * sorted_sum(component_gcres);
}

double jsd_discrete(std::span<const std::vector<double>> distributions,
                    std::optional<double> averaging_coefficient) {
  if (distributions.size() < 2)
    fail(ErrorKind::not_enough_distributions,
         "jsd needs at least 2 distributions, got " + std::to_string(distributions.size()));
  const std::size_t length = distributions.front().size();
  for (const auto& p : distributions) {
    if (p.size() != length)
      fail(ErrorKind::bin_mismatch, "all distributions must share the same length");
    double total = 0.0;
    for (double v : p) {
      if (v < 0.0)
        fail(ErrorKind::not_a_distribution, "probabilities must be non-negative");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
      fail(ErrorKind::not_a_distribution,
           "probabilities sum to " + std::to_string(total) + ", expected 1");
  }

  const std::size_t m = distributions.size();
  std::vector<double> mixture(length);
  std::vector<double> column(m);
  for (std::size_t j = 0; j < length; ++j) {
    for (std::size_t i = 0; i < m; ++i) column[i] = distributions[i][j];
    mixture[j] = sorted_sum(column) / static_cast<double>(m);
  }

  std::vector<double> entropies(m);
  for (std::size_t i = 0; i < m; ++i) entropies[i] = shannon_entropy(distributions[i]);
  const double coefficient =
      averaging_coefficient ? *averaging_coefficient : 1.0 / static_cast<double>(m);
  return shannon_entropy(mixture) - coefficient * sorted_sum(entropies);
}

}  // namespace forgetcurate::likelihood
