#pragma once

#include <stdexcept>
#include <string>

namespace pcapp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatch, non-finite entries, ranks out of range.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A factor-model specification that cannot be laid out.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Truncation rank smaller than the requested subspace dimension.
class InvalidTruncation : public Error {
 public:
  using Error::Error;
};

/// Covariance with no positive variance, or too few usable directions.
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration problems (unknown preset, bad key, bad value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcapp
