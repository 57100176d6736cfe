#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent user configuration (bad file, bad field, missing poling).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Wavelength or grid coordinate outside the tabulated validity range.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Non-finite values, singular configurations, failed decompositions.
class NumericError : public Error {
public:
  using Error::Error;
};

class FitError : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace spdc
