#pragma once

#include <stdexcept>
#include <string>

namespace sdcbf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

/// The state handed to the synthesizer is already outside the safe set.
class UnsafeStateError : public Error {
 public:
  using Error::Error;
};

/// A state left the region over which the Lipschitz bounds are declared.
class OperatingBoxError : public Error {
 public:
  using Error::Error;
};

/// Theta * dt exceeded the exponent limit; the bound would be useless.
class BoundOverflowError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdcbf
