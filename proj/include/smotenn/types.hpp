#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smotenn {

using SampleId = std::int64_t;

/// Binary class tag. Minority is the positive class throughout.
enum class Label : std::uint8_t { Minority = 0, Majority = 1 };

inline const char* to_string(Label label) {
  return label == Label::Minority ? "minority" : "majority";
}

/// Row-major feature storage: one sample per row.
template <typename Scalar>
using FeatureMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using FeatureRowT = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using FeatureMatrix = FeatureMatrixT<double>;
using FeatureRow = FeatureRowT<double>;

// Error kinds map onto CLI exit codes: parse/config -> 1, precondition -> 2, io -> 3.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or dataset that violates structural invariants.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (flags, spec fields, infeasible plans).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An algorithm's precondition does not hold for the given data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operation on an object in an unusable state (e.g. an empty index).
class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smotenn
