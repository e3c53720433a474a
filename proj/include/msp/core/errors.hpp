#ifndef MSP_CORE_ERRORS_HPP
#define MSP_CORE_ERRORS_HPP

#include "msp/core/types.hpp"

#include <stdexcept>
#include <string>

namespace msp {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A Cholesky pivot fell below the threshold. `level` is the block index
/// inside a Schur chain, or -1 for a standalone factorization.
class NotPositiveDefinite : public Error
{
public:
  NotPositiveDefinite(const std::string& what, Index pivot, Index level = -1)
    : Error(what), pivot_(pivot), level_(level)
  {}

  Index pivot() const { return pivot_; }
  Index level() const { return level_; }

private:
  Index pivot_;
  Index level_;
};

class DimensionCap : public Error
{
public:
  using Error::Error;
};

class ShapeMismatch : public Error
{
public:
  using Error::Error;
};

class AssumptionViolated : public Error
{
public:
  using Error::Error;
};

class DegenerateGamma : public Error
{
public:
  using Error::Error;
};

class WrongBlockCount : public Error
{
public:
  using Error::Error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace msp

#endif
