#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swsed {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, parameter or scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a closure formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace swsed
