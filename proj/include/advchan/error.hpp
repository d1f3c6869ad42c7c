#pragma once

#include <stdexcept>
#include <string>

namespace advchan {

// Base of every error thrown by the library. The C API maps each subclass
// onto a distinct status code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

// A numerical routine could not bracket or converge.
class SolverError : public Error {
public:
  using Error::Error;
};

// Shapes or parameters that cannot describe a valid code or scenario.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Malformed input text (JSON scenario, code file). The message carries
// line/column context when it is known.
class ParseError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// A simulation invariant was broken; indicates a bug, not bad input.
class InvariantError : public Error {
public:
  using Error::Error;
};

}  // namespace advchan
