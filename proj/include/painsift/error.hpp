#pragma once

#include <stdexcept>
#include <string>

namespace painsift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (corpus files, artifacts).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A feature vector does not match the layout a model was trained on.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during training (e.g. a diverging loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace painsift
