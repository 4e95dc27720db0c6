#pragma once

#include <stdexcept>
#include <string>

namespace forgetcurate {

// Every recoverable failure in the library is reported as an Error with a
// stable kind. The CLI maps any Error to exit code 2.
enum class ErrorKind {
  empty_input,
  empty_precursor_set,
  malformed_smiles,
  too_few_products,
  shape_error,
  insufficient_forgotten_pool,
  insufficient_class_pool,
  empty_class,
  bin_mismatch,
  not_enough_distributions,
  not_a_distribution,
  missing_truth,
  missing_round_trip,
  missing_class,
  empty_sample,
  degenerate_variance,
  id_mismatch,
  size_mismatch,
  empty_set,
  parameter_error,
  insufficient_candidates,
  k_too_large,
  degenerate_task,
  io_error,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace forgetcurate
