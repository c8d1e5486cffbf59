#pragma once

#include <stdexcept>
#include <string>

namespace hrgraph {

// Input failed a structural or numerical precondition.
class ValidationError : public std::runtime_error {
 public:
  enum class Reason {
    not_square,
    too_small,
    asymmetric,
    nonzero_diagonal,
    nonpositive_offdiagonal,
    not_conditionally_negative_definite,
    rank_deficient,
    nonzero_row_sums,
    not_finite,
    constant_column,
    bad_argument,
    disconnected_graph,
    dimension_mismatch,
  };

  ValidationError(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

// An iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hrgraph
