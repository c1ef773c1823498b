#pragma once

#include <stdexcept>
#include <string>

namespace hdgmv {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between vectors/matrices/panels.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Too few observations for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be solved is singular or numerically near-singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// A scalar parameter lies outside the admissible domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The target portfolio numerically coincides with the sample GMV portfolio,
// so the shrinkage intensity formula degenerates.
class DegenerateTargetError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (grids, window sizes, missing seed, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; message carries row/column coordinates when known.
class CsvFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdgmv
