#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oneshot {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid arguments or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value during a forward or backward pass.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t layer)
      : Error(what), layer_(layer) {}
  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

/// Requested pair batch cannot be built from the available unique pairs.
class PairQuotaError : public Error {
 public:
  PairQuotaError(const std::string& what, std::size_t achievable)
      : Error(what), achievable_(achievable) {}
  std::size_t achievable_batch_size() const noexcept { return achievable_; }

 private:
  std::size_t achievable_;
};

}  // namespace oneshot
