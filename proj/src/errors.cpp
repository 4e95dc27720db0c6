#include "forgetcurate/errors.hpp"

namespace forgetcurate {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::empty_input: return "EmptyInput";
    case ErrorKind::empty_precursor_set: return "EmptyPrecursorSet";
    case ErrorKind::malformed_smiles: return "MalformedSmiles";
    case ErrorKind::too_few_products: return "TooFewProducts";
    case ErrorKind::shape_error: return "ShapeError";
    case ErrorKind::insufficient_forgotten_pool: return "InsufficientForgottenPool";
    case ErrorKind::insufficient_class_pool: return "InsufficientClassPool";
    case ErrorKind::empty_class: return "EmptyClass";
    case ErrorKind::bin_mismatch: return "BinMismatch";
    case ErrorKind::not_enough_distributions: return "NotEnoughDistributions";
    case ErrorKind::not_a_distribution: return "NotADistribution";
    case ErrorKind::missing_truth: return "MissingTruth";
    case ErrorKind::missing_round_trip: return "MissingRoundTrip";
    case ErrorKind::missing_class: return "MissingClass";
    case ErrorKind::empty_sample: return "EmptySample";
    case ErrorKind::degenerate_variance: return "DegenerateVariance";
    case ErrorKind::id_mismatch: return "IdMismatch";
    case ErrorKind::size_mismatch: return "SizeMismatch";
    case ErrorKind::empty_set: return "EmptySet";
    case ErrorKind::parameter_error: return "ParameterError";
    case ErrorKind::insufficient_candidates: return "InsufficientCandidates";
    case ErrorKind::k_too_large: return "KTooLarge";
    case ErrorKind::degenerate_task: return "DegenerateTask";
    case ErrorKind::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace forgetcurate
