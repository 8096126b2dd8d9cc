#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "ldk/term.hpp"

namespace ldk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No typing rule applies. `position` locates the offending subterm.
struct TypeError : Error {
  TypeError(Position pos, std::string why)
      : Error("type error at " + pos.str() + ": " + why), position(std::move(pos)),
        reason(std::move(why)) {}
  Position position;
  std::string reason;
};
using IllTyped = TypeError;

/// An elimination frame was given a hole type of the wrong shape.
struct HoleTypeMismatch : TypeError {
  using TypeError::TypeError;
};

/// A context declares the same variable twice.
struct DuplicateBinding : Error {
  explicit DuplicateBinding(const Name& x) : Error("duplicate declaration of " + x), name(x) {}
  Name name;
};

struct NotARedex : Error {
  using Error::Error;
};

struct SyntaxError : Error {
  SyntaxError(std::size_t l, std::size_t c, std::string exp)
      : Error(std::to_string(l) + ":" + std::to_string(c) + ": expected " + exp), line(l),
        column(c), expected(std::move(exp)) {}
  std::size_t line;
  std::size_t column;
  std::string expected;
};

/// The conjunction translation was given a formula or term containing disjunction.
struct DisjPresent : Error {
  using Error::Error;
};

/// Two steps handed to a postponement do not compose.
struct NotChained : Error {
  using Error::Error;
};

/// A commutation or postponement diagram could not be closed. Reported as a
/// law violation by the harness.
struct CannotClose : Error {
  using Error::Error;
};

}  // namespace ldk
