#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bsprng {

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed layout: ragged rows, wrong register counts, unequal message lengths.
class StructuralError : public Error
{
public:
  using Error::Error;
};

// Bad key material, bad polynomial, bad parameters.
class ValidationError : public Error
{
public:
  using Error::Error;
};

// Lane or register index outside of the valid range.
class IndexError : public Error
{
public:
  using Error::Error;
};

// Shift/rotation amount or size outside of the valid range.
class RangeError : public Error
{
public:
  using Error::Error;
};

// A per-lane validation failure inside a batched (sliced) operation.
class LaneError : public ValidationError
{
public:
  LaneError(std::size_t lane, const std::string& what)
    : ValidationError("lane " + std::to_string(lane) + ": " + what)
    , lane_(lane)
  {
  }

  std::size_t lane() const noexcept { return lane_; }

private:
  std::size_t lane_;
};

// Input too short for a statistical test; carries the minimum length.
class InsufficientData : public Error
{
public:
  InsufficientData(const std::string& test, std::size_t minimum, std::size_t got)
    : Error(test + ": needs at least " + std::to_string(minimum) + " bits, got " +
            std::to_string(got))
    , minimum_(minimum)
  {
  }

  std::size_t minimum() const noexcept { return minimum_; }

private:
  std::size_t minimum_;
};

// Raised when a (key, nonce) counter space would wrap around.
class CounterExhausted : public Error
{
public:
  using Error::Error;
};

} // namespace bsprng
