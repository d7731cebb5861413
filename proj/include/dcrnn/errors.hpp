#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dcrnn {

// Operand shapes are inconsistent (non-square input, length mismatch, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An eigenvalue is too close to a neighbor for the perturbation formula.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state became non-finite; `step` is the first offending time index.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& msg, std::size_t step)
      : std::runtime_error(msg + " at step " + std::to_string(step)), step(step) {}
  std::size_t step;
};

// A binary file failed validation; `offset` is the byte position of the problem.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at byte offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;
};

// A config file failed validation; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
  std::size_t line;
};

// Coefficient does not fit the result type.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every trial of an experiment failed.
class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dcrnn
