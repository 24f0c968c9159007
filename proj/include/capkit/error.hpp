#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace capkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed group, subgroup, variety or command-line spec.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::string hint = {})
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position), hint_(std::move(hint)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& hint() const noexcept { return hint_; }

 private:
  std::size_t position_;
  std::string hint_;
};

/// A size limit (table order, homology order, abelian order) was exceeded,
/// or no engine can handle the requested group.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Arguments violate a precondition: non-normal subgroup, mismatched
/// endpoints, a map that is not a homomorphism.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The homology and abelian engines produced different answers.
class EngineMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace capkit
