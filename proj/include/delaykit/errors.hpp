#pragma once

#include <stdexcept>
#include <string>

namespace delaykit {

/// A series truncation could not reach the requested tolerance within the
/// configured term cap. Carries the tail bound that was actually achieved.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}

  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

/// A per-term magnitude left the representable floating-point range.
class NumericRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time stepping blew up (magnitude guard tripped).
class DivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operation needs data the caller did not supply.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace delaykit
