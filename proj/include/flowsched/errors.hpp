#pragma once

#include <stdexcept>
#include <string>

namespace flowsched {

// Bad or inconsistent input data (files, hand-built structs).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized data; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated a documented precondition (e.g. handed a non-maximal
// flow to the dual extraction). Indicates a bug, not bad data.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Exhaustive enumeration was refused because the search space is too big.
class InstanceTooLarge : public std::runtime_error {
 public:
  explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace detail

}  // namespace flowsched
