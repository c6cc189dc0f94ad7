#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace novak {

/// Malformed or out-of-range input (bad residue, unparsable text, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Text that does not parse. Line and column are 1-based; 0 means unknown.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parameters outside the regime an operation is defined for.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Orbit data that does not match its base block.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound that must hold for every valid input was violated.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A precondition of a construction step failed. `orbit` names the
/// offending orbit when there is one.
class PreconditionError : public std::runtime_error {
 public:
  static constexpr std::size_t kNoOrbit = static_cast<std::size_t>(-1);

  explicit PreconditionError(const std::string& what,
                             std::size_t orbit = kNoOrbit)
      : std::runtime_error(what), orbit_(orbit) {}

  std::size_t orbit() const noexcept { return orbit_; }

 private:
  std::size_t orbit_;
};

/// A randomized construction gave up after its retry budget.
class RetryExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace novak
