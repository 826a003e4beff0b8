// Error taxonomy shared by all modules. Each class maps to exactly one CLI
// exit code so no library failure mode is ambiguous at the process boundary.
#pragma once

#include <stdexcept>
#include <string>

namespace susytrm {

// exit code 2: malformed configuration / domain violations
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit code 3: seed/transformation rule violations
struct SeedRuleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSeedCombination : SeedRuleError {
  using SeedRuleError::SeedRuleError;
};
struct PreconditionError : SeedRuleError {
  using SeedRuleError::SeedRuleError;
};
struct SingularTransformError : SeedRuleError {
  using SeedRuleError::SeedRuleError;
};
struct SpectralCollisionError : SeedRuleError {
  using SeedRuleError::SeedRuleError;
};
struct DegenerateEnergyError : SeedRuleError {
  using SeedRuleError::SeedRuleError;
};

// exit code 4: oracle verification mismatch (raised only by the verify driver)
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit code 5: numerical machinery failures
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleError : NumericalError {
  using NumericalError::NumericalError;
};
struct ParameterPoleError : NumericalError {
  using NumericalError::NumericalError;
};
struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};
struct BranchError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace susytrm
