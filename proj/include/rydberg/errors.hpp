#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rydberg {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The trace-constrained Liouvillian is rank deficient; usually an
/// unphysical parameter set (no relaxation path).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// A solver failure inside a sweep, tagged with the detuning that caused it.
class SweepPointError : public Error {
 public:
  SweepPointError(double detuning, const std::string& what)
      : Error("at detuning " + std::to_string(detuning) + " rad/s: " + what),
        detuning_(detuning) {}
  double detuning() const { return detuning_; }

 private:
  double detuning_;
};

class NonpositiveNoise : public Error {
 public:
  using Error::Error;
};

class BadSlope : public Error {
 public:
  using Error::Error;
};

class NoCrossing : public Error {
 public:
  using Error::Error;
};

class InsufficientPoints : public Error {
 public:
  using Error::Error;
};

class CalibrationDiverged : public Error {
 public:
  using Error::Error;
};

/// Error raised inside a scan, annotated with the row index.
class ScanRowError : public Error {
 public:
  ScanRowError(std::size_t row, const std::string& what)
      : Error("scan row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace rydberg
