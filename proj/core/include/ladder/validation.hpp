#pragma once

#include <string>
#include <vector>

namespace ladder {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct ValidationOptions {
  /// Perturbs one off-diagonal element of the Hamiltonian under test so the
  /// symmetry check must fail.
  bool inject_symmetry_fault = false;
  unsigned threads = 1;
};

/// Desk-scale invariant suite: basis orthogonality, antisymmetry of U^T U',
/// parity selection of V elements, trace preservation, even-y symmetry,
/// Hamiltonian symmetry, parity-block decoupling, level-shift covariance and
/// determinism.
ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace ladder
