#pragma once

#include <stdexcept>
#include <string>

namespace mbs {

/// Caller supplied parameters outside an operation's contract.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource bound (plane order, enumeration size) was exceeded.
class ResourceLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An exhaustive search ran out of candidates where existence is guaranteed.
/// Seeing this means the implementation (or the theory behind it) is wrong.
class ConsistencyFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mbs
