#pragma once

#include <stdexcept>

namespace benfrag {

/// Invalid parameters or configuration. The CLI maps this to exit status 2.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical certificate failed (quadrature residual, non-convergence).
/// The CLI maps this to exit status 3.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing an experiment file failed. Exit status 4.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace benfrag
