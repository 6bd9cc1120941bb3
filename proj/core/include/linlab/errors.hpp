#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linlab {

// Caller broke a documented precondition (shape mismatch, out-of-range argument).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations)
      : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

// Base for everything that goes wrong while reading or selecting data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyClassError : public DataError {
 public:
  using DataError::DataError;
};

#define LINLAB_REQUIRE(cond, msg)                  \
  do {                                             \
    if (!(cond)) throw ::linlab::ContractViolation(msg); \
  } while (0)

}  // namespace linlab
