#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stqp {

/// Invalid ensemble or option parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A block is too large for exhaustive support enumeration.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::size_t component_index, std::size_t component_size,
                std::size_t cap)
      : std::runtime_error("component " + std::to_string(component_index) +
                           " has " + std::to_string(component_size) +
                           " vertices, above the support cap of " +
                           std::to_string(cap)),
        component_index_(component_index),
        component_size_(component_size),
        cap_(cap) {}

  std::size_t component_index() const noexcept { return component_index_; }
  std::size_t component_size() const noexcept { return component_size_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t component_index_;
  std::size_t component_size_;
  std::size_t cap_;
};

/// A self-check on solver output failed.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Quadrature did not reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed matrix text input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stqp
