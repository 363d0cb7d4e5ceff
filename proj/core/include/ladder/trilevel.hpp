#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ladder/model.hpp"

namespace ladder {

/// Minimum separation of two adiabatic levels below which an eigenbasis is
/// refused (the basis is not differentiable through an exact crossing).
inline constexpr double kDegeneracyGuard = 1e-8;

/// Depressed-cubic data for the three-level block at coordinate y:
/// with eps = E - (e1+e2+e3)/3 the characteristic equation reads
/// eps^3 - alpha*eps = beta, solved through eps = amp*sin(theta/3 + 2*pi*k/3).
struct CubicCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double amp = 0.0;    // sqrt(4*alpha/3)
  double theta = 0.0;  // asin(-4*beta/amp^3), argument clamped to [-1, 1]
};

/// Eigenvalues and a real orthogonal eigenbasis of the three-level block at y.
/// Column j of `basis` is the eigenvector of levels[j]; levels ascend.
struct AdiabaticPoint {
  double y = 0.0;
  std::array<double, 3> levels{};
  Eigen::Matrix3d basis = Eigen::Matrix3d::Identity();
};

/// The symmetric 3x3 block [[e1, c1, 0], [c1, e2, c2], [0, c2, e3]] with
/// c1 = sqrt(2)*u*y and c2 = sqrt(2)*v*y.
Eigen::Matrix3d level_matrix(const ModelParams& params, double y);

CubicCoefficients cubic_coefficients(const ModelParams& params, double y);

/// Sorted roots of the characteristic cubic via the triple-angle form.
std::array<double, 3> eigenvalues_at(const ModelParams& params, double y);

/// Eigenbasis with the canonical sign convention: in columns 1 and 2 the
/// largest-magnitude component is positive, column 3 is oriented so that
/// det(basis) = +1. Throws NearDegeneracy if two levels are closer than
/// kDegeneracyGuard.
AdiabaticPoint eigenbasis_at(const ModelParams& params, double y);

/// Eigenbasis whose column signs maximise the overlap with the matching
/// columns of `reference`.
AdiabaticPoint eigenbasis_at(const ModelParams& params, double y,
                             const Eigen::Matrix3d& reference);

/// Eigenbasis in the continuous gauge: the basis is followed from the
/// identity at y = 0 out to y with overlap matching, so every column is a
/// smooth function of y. Negative y uses U(-y) = D U(y) D, D = diag(1,-1,1).
AdiabaticPoint continuous_eigenbasis(const ModelParams& params, double y);

/// Continuous-gauge eigenbases for many coordinates; the result is ordered
/// like `ys`. One sweep outward from y = 0 serves all points.
std::vector<AdiabaticPoint> continuous_eigenbasis(const ModelParams& params,
                                                  std::span<const double> ys);

}  // namespace ladder
