#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liftrom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the model's valid domain (e.g. non-positive temperature).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested rank exceeds what the data supports.
class RankError : public Error {
 public:
  RankError(const std::string& what, std::ptrdiff_t numerical_rank)
      : Error(what), numerical_rank_(numerical_rank) {}
  std::ptrdiff_t numerical_rank() const { return numerical_rank_; }

 private:
  std::ptrdiff_t numerical_rank_;
};

/// Time integration failure (Newton divergence, non-finite state).
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Refused to build an operator larger than the configured memory budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liftrom
