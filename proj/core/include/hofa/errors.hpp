#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hofa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong group, element out of range, bad parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An input violates a mathematical hypothesis of the requested operation
/// (not a p-group, not surjective, orders not coprime, not a cocycle).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// A computed result failed its own postcondition check.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The requested computation exceeds the configured cost cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::uint64_t needed, std::uint64_t cap);
  std::uint64_t needed() const noexcept { return needed_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t needed_;
  std::uint64_t cap_;
};

/// Default budget of elementary operations for exhaustive computations.
inline constexpr std::uint64_t kDefaultCostCap = std::uint64_t{1} << 30;

}  // namespace hofa
