#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hconvex {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Raised by readers; `line()` is 1-based, 0 when the error is not tied to a row.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ConditioningError : public Error {
public:
  ConditioningError(const std::string& what, std::size_t index)
    : Error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class SolverError : public Error {
public:
  SolverError(const std::string& what, double residual)
    : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class DegenerateError : public Error {
public:
  using Error::Error;
};

class NearZeroFieldError : public Error {
public:
  NearZeroFieldError(const std::string& what, std::size_t node, std::size_t source)
    : Error(what), node_(node), source_(source) {}

  std::size_t node() const noexcept { return node_; }
  std::size_t source() const noexcept { return source_; }

private:
  std::size_t node_;
  std::size_t source_;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

// Missing upstream artifact in the staged pipeline.
class StageError : public Error {
public:
  using Error::Error;
};

}  // namespace hconvex
