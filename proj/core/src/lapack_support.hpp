#pragma once

// Thin RAII-free wrappers over the LAPACKE routines the library needs. All
// matrices are column-major; all functions throw ConvergenceError on a
// nonzero LAPACK info.

#include <cstddef>
#include <vector>

namespace ladder::detail {

struct Eigensystem {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major, n x values.size()
  std::size_t n = 0;

  double vector(std::size_t row, std::size_t col) const { return vectors[col * n + row]; }
};

/// All eigenvalues of a symmetric tridiagonal matrix.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

/// All eigenpairs of a symmetric tridiagonal matrix.
Eigensystem tridiagonal_eigensystem(std::vector<double> diag, std::vector<double> off);

/// Eigenpairs with 0-based indices [first, last] (ascending order) of a
/// symmetric tridiagonal matrix, by bisection and inverse iteration.
Eigensystem tridiagonal_eigenpairs_by_index(const std::vector<double>& diag,
                                            const std::vector<double>& off, std::size_t first,
                                            std::size_t last);

/// Eigenpairs with eigenvalue in (lower, upper] of a symmetric band matrix
/// stored in LAPACK lower band form: band[k + d*(kd+1)] holds A(d+k, d).
Eigensystem band_eigenpairs_in_range(std::vector<double> band, std::size_t n, std::size_t kd,
                                     double lower, double upper);

/// All eigenpairs of a dense symmetric matrix (column-major, overwritten copy).
Eigensystem dense_eigensystem(std::vector<double> matrix, std::size_t n);

}  // namespace ladder::detail
