#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace lfold {

// Bad argument outside an operation's mathematical domain (n = 0, D >= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Index beyond a stored table.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Unsupported or malformed user input (weight not in the supported set, step too coarse).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical invariant failed on data (corrupted coefficients, bad file).
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what,
                              std::optional<std::pair<std::uint64_t, std::uint64_t>> pair = std::nullopt)
      : std::runtime_error(what), pair_(pair) {}

  // The (m, n) pair that failed, when the check is pairwise.
  const std::optional<std::pair<std::uint64_t, std::uint64_t>>& failing_pair() const noexcept { return pair_; }

 private:
  std::optional<std::pair<std::uint64_t, std::uint64_t>> pair_;
};

// A theorem-level identity failed inside the library: always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lfold
