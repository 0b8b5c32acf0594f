#pragma once

#include <stdexcept>
#include <string>

namespace infoot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: shape mismatch, bad marginals, negative distances, etc.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A domain whose points are all identical, so no kernel scale exists.
class DegenerateDomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace infoot
