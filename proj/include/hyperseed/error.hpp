#pragma once

#include <stdexcept>
#include <string>

namespace hyperseed {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero dimensionality or two operands of different dimensionality.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Cosine similarity requested for a vector whose real part has zero norm.
class UndefinedSimilarity : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument does not hold (empty input, bad size, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: unreadable files, bad CSV cells, empty corpora.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration. The message starts with the field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace hyperseed
