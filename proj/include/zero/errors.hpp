#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zero {

/// Root of every error the toolkit throws on bad input or bad data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. `line()` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Precondition violations on arguments (duplicates, empty inputs, bad ranges).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Gold labels or sentence identifiers that do not fit the model being trained.
class DataError : public Error {
 public:
  using Error::Error;
};

class MissingEmbeddingError : public Error {
 public:
  MissingEmbeddingError(const std::string& what, std::vector<std::string> missing)
      : Error(what), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t epoch) : Error(what), epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace zero
