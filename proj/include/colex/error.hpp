#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colex {

// Base for every failure the library reports. Subclasses name the contract
// that was broken so callers can recover selectively (replan, shrink, stop).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class InvalidPoseError : public Error {
 public:
  using Error::Error;
};

class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class EmptyProblemError : public Error {
 public:
  using Error::Error;
};

class StuckError : public Error {
 public:
  using Error::Error;
};

class InvalidPathError : public Error {
 public:
  using Error::Error;
};

class CorridorBreakError : public Error {
 public:
  CorridorBreakError(std::size_t covered, const std::string& what) : Error(what), covered_(covered) {}
  // Leading path cells that the boxes built so far do cover.
  std::size_t covered() const { return covered_; }

 private:
  std::size_t covered_;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string family, const std::string& what)
      : Error(what), family_(std::move(family)) {}
  // Constraint family that could not be satisfied, e.g. "velocity".
  const std::string& family() const { return family_; }

 private:
  std::string family_;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace colex
