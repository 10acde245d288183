#pragma once

#include <stdexcept>
#include <string>

namespace sgf {

// Every library error derives from Error; exit_code() is what the CLI returns.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
};

// Bad arguments or configuration (CLI exit 2).
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class ArgumentError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Malformed or unusable input data (CLI exit 3).
class DataError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ClassificationError : public DataError {
 public:
  using DataError::DataError;
};

class InitializationError : public DataError {
 public:
  using DataError::DataError;
};

// NaN/Inf or divergence (CLI exit 4).
class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

}  // namespace sgf
