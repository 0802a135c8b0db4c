#pragma once

#include <stdexcept>
#include <string>

namespace mvhull {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument values (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

/// Filesystem / format failures (CLI exit code 3).
struct IoError : Error {
  using Error::Error;
};

/// Inputs whose shapes or keys do not line up (CLI exit code 4).
struct DimensionMismatch : Error {
  using Error::Error;
};

struct DegenerateProjection : Error {
  using Error::Error;
};

struct InvalidScale : ConfigError {
  using ConfigError::ConfigError;
};

struct InvalidFactor : ConfigError {
  using ConfigError::ConfigError;
};

struct NonDividingFactor : ConfigError {
  using ConfigError::ConfigError;
};

struct IndexOutOfGrid : Error {
  using Error::Error;
};

struct UnknownMode : ConfigError {
  using ConfigError::ConfigError;
};

struct PlacementFailure : Error {
  using Error::Error;
};

struct InvalidCamera : Error {
  using Error::Error;
};

struct NoGroundTruth : Error {
  using Error::Error;
};

}  // namespace mvhull
