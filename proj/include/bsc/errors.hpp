#pragma once

#include <stdexcept>
#include <string>

namespace bsc {

// Base class for all library errors so callers can catch bsc::Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Closed-form kernel sum requested on radii whose squares are closer than
// the separation threshold; caller should switch to the stable evaluator.
class NearDegenerateRadii : public Error {
 public:
  using Error::Error;
};

// Exactly coincident squares where an operation requires them distinct.
class DegenerateRadii : public Error {
 public:
  using Error::Error;
};

class QuadratureBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DerivativeOrderTooHigh : public Error {
 public:
  using Error::Error;
};

class TableRangeExceeded : public Error {
 public:
  using Error::Error;
};

class LatticeTooCoarse : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class UnstableTimestep : public Error {
 public:
  using Error::Error;
};

class CounterexampleFound : public Error {
 public:
  using Error::Error;
};

class BoundViolated : public Error {
 public:
  using Error::Error;
};

class FitFailed : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsc
