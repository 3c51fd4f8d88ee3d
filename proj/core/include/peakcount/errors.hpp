#pragma once

#include <stdexcept>
#include <string>

namespace peakcount {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidParams : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

class NegativeRadius : public Error {
public:
  using Error::Error;
};

class QuadratureFailure : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NotHomogeneous : public Error {
public:
  using Error::Error;
};

class DegreeTooLow : public Error {
public:
  using Error::Error;
};

class MomentUnavailable : public Error {
public:
  using Error::Error;
};

class NotAZero : public Error {
public:
  using Error::Error;
};

class DegeneratePsi : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

/// Wraps an upstream failure with the name of the pipeline stage it came from.
class StageError : public Error {
public:
  StageError(const std::string& stage, const std::string& cause)
      : Error("[" + stage + "] " + cause), stage_(stage) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace peakcount
