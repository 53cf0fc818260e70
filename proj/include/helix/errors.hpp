#pragma once

#include <stdexcept>
#include <string>

namespace helix {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Out-of-domain scalar parameter (sigma, theta, eps, alpha, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Grid too coarse for the requested object, or a bad cell address.
class GridError : public Error {
public:
  using Error::Error;
};

/// A builder was asked for a parameter point outside the regime it covers.
class RegimeError : public Error {
public:
  using Error::Error;
};

/// Malformed input data (overlapping balls, invalid measure, bad config).
class InputError : public Error {
public:
  using Error::Error;
};

/// Geometry that violates a hypothesis (annulus outside domain, T <= 0, ...).
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Nonpositive or otherwise unusable data handed to a fit.
class DataError : public Error {
public:
  using Error::Error;
};

/// Discrete invariant broken; indicates corrupted input rather than a user mistake.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace helix
