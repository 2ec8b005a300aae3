#pragma once

#include <stdexcept>
#include <string>

namespace shrinker {

// Malformed or out-of-contract input (bad metric, unknown name, bad parameter).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation needs more derivatives than the supplied jets carry.
class JetOrderError : public std::runtime_error {
 public:
  JetOrderError(const std::string& what, int required, int available)
      : std::runtime_error("insufficient jet order: " + what + " requires order " +
                           std::to_string(required) + ", got " + std::to_string(available)),
        required_(required),
        available_(available) {}
  int required() const { return required_; }
  int available() const { return available_; }

 private:
  int required_;
  int available_;
};

// An operation that is only valid on gradient solitons was applied elsewhere.
class NotASolitonError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Integration domain problems: irregular level, unbounded domain without weight.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace shrinker
