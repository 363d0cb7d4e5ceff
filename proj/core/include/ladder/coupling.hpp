#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ladder/model.hpp"

namespace ladder {

/// Entries of the antisymmetric matrix U^T dU/dy at coordinate y, in the
/// continuous gauge (see continuous_eigenbasis).
struct CouplingSample {
  double y = 0.0;
  double f12 = 0.0;
  double f13 = 0.0;
  double f23 = 0.0;
  double step = 0.0;
  /// Richardson estimate of the truncation error of the returned values.
  double error_estimate = 0.0;

  /// Element (j, k) of U^T dU/dy for levels j, k in {1,2,3}.
  double element(int j, int k) const;
  Eigen::Matrix3d matrix() const;
};

/// Default central-difference step: 1e-4 * max(1, |y|).
double default_coupling_step(double y);

/// Coupling functions by central differences of the eigenbasis at steps h
/// and h/2, Richardson-extrapolated. Throws ConvergenceError when the error
/// estimate exceeds 1% of the largest coupling (and the round-off floor).
/// step <= 0 selects default_coupling_step(y).
CouplingSample coupling_functions(const ModelParams& params, double y, double step = 0.0);

/// Batch form sharing one continuous-gauge sweep; ordered like `ys`.
std::vector<CouplingSample> coupling_functions(const ModelParams& params,
                                               std::span<const double> ys);

/// All nine entries of U^T (U(y+h) - U(y-h)) / (2h): plain central
/// differences, no extrapolation.
Eigen::Matrix3d basis_derivative_products(const ModelParams& params, double y, double step);

enum class MatrixElementMethod { hermite_quadrature, fock_window };

MatrixElementMethod parse_matrix_element_method(std::string_view name);
std::string_view to_string(MatrixElementMethod method);

/// <Phi_{j,n}| V |Phi_{k,m}> request; Phi_{j,n} is level j of the rotated
/// frame times the oscillator eigenfunction phi_n.
struct OscillatorMatrixElementRequest {
  int j = 1;
  int k = 2;
  std::int64_t n = 0;
  std::int64_t m = 0;
  MatrixElementMethod method = MatrixElementMethod::hermite_quadrature;
};

struct MatrixElementOptions {
  /// Relative change allowed when the quadrature order or window padding
  /// is doubled.
  double rel_tol = 1e-8;
  /// Fock-window padding beyond [min(n,m), max(n,m)]; <= 0 selects 4|n-m|+64.
  std::int64_t padding = 0;
};

inline constexpr std::int64_t kMaxHermiteQuantum = 5000;

/// Rotated-frame residual coupling
///   V = -(1/2) { d/dy A(y) + A(y) d/dy },  A = U^T dU/dy,
/// between two product states. Evaluated in the integrated-by-parts form
/// (1/2) int A_jk (phi_n' phi_m - phi_n phi_m') dy, which is symmetric under
/// (j,n) <-> (k,m). Throws ConvergenceError if doubling the quadrature order
/// (or the window padding) moves the result by more than rel_tol.
double v_matrix_element(const ModelParams& params, const OscillatorMatrixElementRequest& req,
                        const MatrixElementOptions& options = {});

/// <Phi_{j,n}| V |Phi_{k,m}> for rotated-frame states Phi_{j,n} = e_j u_{j,n}(y),
/// where u_{j,n} is the eigenfunction of (1/2)(-d2/dy2 + y2) + E_j(y) with mean
/// occupation nearest n. v_matrix_element is the same element with u_{j,n}
/// replaced by the oscillator function phi_n. Computed on a Fock-window DVR
/// that is widened until both states fit, then checked against a doubled
/// window. Each u is signed so that its largest component is positive.
double adiabatic_v_element(const ModelParams& params, int j, int k, std::int64_t n,
                           std::int64_t m, const MatrixElementOptions& options = {});

/// Diagonal expectation <Phi_{j,n}| W |Phi_{j,n}> of
/// W = -(1/2) A(y)^2 for j = 1, 2, 3, i.e. (1/2) <phi_n| sum_k A_jk^2 |phi_n>.
std::array<double, 3> w_expectation(const ModelParams& params, std::int64_t n,
                                    MatrixElementMethod method,
                                    const MatrixElementOptions& options = {});

}  // namespace ladder
