#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoforge {

// Root of the library's exception hierarchy. Subcommands map these onto
// process exit codes (config=2, data=3, network=4).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

class NetworkError : public Error {
public:
  using Error::Error;
};

// Malformed logic-form text. Carries the byte offset of the failure and a
// short hint naming what the parser expected there.
class SyntaxError : public DataError {
public:
  SyntaxError(std::size_t offset, std::string expected)
      : DataError("syntax error at byte " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

// Two facts assign different values to the same element.
class InconsistencyError : public DataError {
public:
  using DataError::DataError;
};

class CountMismatchError : public DataError {
public:
  CountMismatchError(const std::string& split, long expected, long actual)
      : DataError("count mismatch for " + split + ": expected " + std::to_string(expected) +
                  ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  long expected() const { return expected_; }
  long actual() const { return actual_; }

private:
  long expected_;
  long actual_;
};

}  // namespace geoforge
