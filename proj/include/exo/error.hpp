#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A filter, curve or controller was configured outside its valid domain.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration (mapping tables, rosters, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a precondition (misaligned streams, empty sets, bad files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A streaming processor received a bad sample.
class StreamError : public DataError {
 public:
  StreamError(const std::string& what, std::size_t index)
      : DataError(what + " at sample " + std::to_string(index)), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// MTU length at or below tendon slack length; fiber length undefined.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

}  // namespace exo
