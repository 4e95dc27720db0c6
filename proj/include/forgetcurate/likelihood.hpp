#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace forgetcurate::likelihood {

inline constexpr int kDefaultBins = 300;

// Prediction confidence of one example, with the correctness flag that
// decides whether it enters a CDF.
struct ConfidenceRecord {
  std::int64_t example_id = 0;
  int superclass = 0;
  double confidence = 0.0;  // in [0, 1]
  bool correct = false;
};

// Binned empirical CDF on [0, 1]. values[k] is the fraction of samples that
// landed in bins 0..k; samples fall into bin floor(c * bins), with c = 1
// folded into the last bin. The last value is always 1 for a non-empty CDF.
struct EmpiricalCDF {
  int bins = kDefaultBins;
  std::vector<double> edges;   // bins + 1 uniform edges
  std::vector<double> values;  // bins cumulative fractions
  std::size_t sample_count = 0;
  int superclass = -1;  // -1 when not tied to a class
};

// CDF over the confidences of correct records of one superclass. Throws
// Error(empty_class) when no record qualifies.
EmpiricalCDF build_cdf(std::span<const ConfidenceRecord> records, int superclass,
                       int bins = kDefaultBins);

// CDF straight from confidence values (no class/correct filtering).
EmpiricalCDF build_cdf_from_values(std::span<const double> confidences,
                                   int bins = kDefaultBins);

// One CDF per superclass present in `records`, ascending by class; classes
// with zero correct records are skipped and reported.
struct ClassCdfs {
  std::vector<EmpiricalCDF> cdfs;
  std::vector<int> skipped_classes;
};
ClassCdfs build_class_cdfs(std::span<const ConfidenceRecord> records,
                           int bins = kDefaultBins);

// Generalized cumulative residual entropy of a binned CDF,
// -sum_k S_k ln S_k * dx over the survival function S = 1 - F, natural log,
// 0 ln 0 = 0. Non-negative.
double gcre(const EmpiricalCDF& cdf);

struct CjsdOptions {
  std::optional<int> exclude_class;
  // Weight applied to the sum of component GCREs; defaults to 1/M over the
  // included distributions.
  std::optional<double> averaging_coefficient;
};

// Cumulative Jensen-Shannon divergence: GCRE of the bin-wise mean CDF minus
// the averaged component GCREs. Summations run in a canonical sorted order,
// so the result is bitwise invariant under permutation of the input list.
// Throws Error(bin_mismatch) on differing bin counts and
// Error(not_enough_distributions) when fewer than 2 CDFs remain.
double cjsd(std::span<const EmpiricalCDF> cdfs, const CjsdOptions& options = {});

// Discrete Jensen-Shannon divergence over probability vectors, natural log,
// uniform mixture, coefficient defaulting to 1/M.
double jsd_discrete(std::span<const std::vector<double>> distributions,
                    std::optional<double> averaging_coefficient = {});

}  // namespace forgetcurate::likelihood
