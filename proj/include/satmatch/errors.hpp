#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace satmatch {

/// Bad caller input: invalid vertex ids, malformed preference lists, violated
/// preconditions of an analysis routine.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search or enumeration would exceed its configured budget. `estimate` is
/// the size the caller asked us to walk (or a bound on it).
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::uint64_t estimate, std::uint64_t cap)
      : std::runtime_error(what), estimate_(estimate), cap_(cap) {}

  std::uint64_t estimate() const noexcept { return estimate_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t estimate_;
  std::uint64_t cap_;
};

/// An internal consistency check failed. Seeing one of these means the
/// engine is wrong, not the input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace satmatch
