#pragma once

#include <stdexcept>
#include <string>

namespace gyroproxy {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (e.g. factorize(0)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Array extents disagree with each other or with a plan.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A tuning or configuration parameter is invalid (even stencil width, unknown name, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Allocation of a state array failed or would overflow.
class ResourceError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_size_error(const std::string& what);

}  // namespace gyroproxy
