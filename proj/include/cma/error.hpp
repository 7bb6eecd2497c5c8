#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace cma {

/// Base of every error raised by the library. `module()` names the
/// component that raised it so the CLI can report the origin.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

  /// Stable machine-readable kind, used in JSON error objects.
  virtual const char* kind() const noexcept { return "error"; }

 private:
  std::string module_;
};

/// A precondition on the arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

/// Input outside the supported range (degree caps, ambient groups, ...).
class Unsupported : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported"; }
};

/// A finite place divides the discriminant; counting places there would
/// need Newton-polygon machinery, so we refuse instead of guessing.
class RamifiedPlace : public Error {
 public:
  RamifiedPlace(std::string module, mpz_class p, mpz_class disc)
      : Error(std::move(module),
              "prime " + p.get_str() + " divides the discriminant " +
                  disc.get_str() + " (ramified place)"),
        p_(std::move(p)),
        disc_(std::move(disc)) {}

  const mpz_class& prime() const noexcept { return p_; }
  const mpz_class& discriminant() const noexcept { return disc_; }
  const char* kind() const noexcept override { return "ramified_place"; }

 private:
  mpz_class p_;
  mpz_class disc_;
};

/// An exhaustive search would exceed its configured candidate budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "budget_exceeded"; }
};

/// Interval arithmetic could not separate a determinant from zero at the
/// precision cap, and no exact relation was found either.
class IndependenceUndecided : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override {
    return "independence_undecided";
  }
};

/// A group has no element of a required shape (inconsistent inputs).
class NoSuchElement : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "no_such_element"; }
};

/// Malformed external input; `pointer()` is a JSON pointer into the
/// offending document.
class InvalidInput : public Error {
 public:
  InvalidInput(std::string pointer, const std::string& what)
      : Error("io", what + " (at " + (pointer.empty() ? "/" : pointer) + ")"),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }
  const char* kind() const noexcept override { return "invalid_input"; }

 private:
  std::string pointer_;
};

}  // namespace cma
