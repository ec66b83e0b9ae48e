#pragma once

#include <stdexcept>
#include <string>

namespace mpq {

/// Invalid or inconsistent user configuration (exit code 2 in the CLI).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the physical domain of the model (exit code 3 in the CLI).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Spectral content the sampled grid cannot represent faithfully.
class AliasingError : public DomainError {
public:
  AliasingError(const std::string& what, double edge_fraction)
      : DomainError(what), edge_fraction_(edge_fraction) {}

  double edge_fraction() const noexcept { return edge_fraction_; }

private:
  double edge_fraction_;
};

/// Spectral power beyond vartheta <= 1.
class ConstraintError : public DomainError {
public:
  ConstraintError(const std::string& what, double offending_fraction)
      : DomainError(what), offending_fraction_(offending_fraction) {}

  double offending_fraction() const noexcept { return offending_fraction_; }

private:
  double offending_fraction_;
};

} // namespace mpq
