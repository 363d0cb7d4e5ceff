#include "ladder/trilevel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "ladder/errors.hpp"

namespace ladder {
namespace {

constexpr double kArcsinSlack = 1e-10;
constexpr double kMinAmplitude = 1e-12;
// Continuation steps must keep every column overlap above this.
constexpr double kContinuationOverlap = 0.95;

Eigen::Matrix3d parity_flip() {
  return Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
}

// Eigenvector of the symmetric matrix m for eigenvalue e: the largest cross
// product of two rows of (m - e*I).
Eigen::Vector3d null_vector(const Eigen::Matrix3d& m, double e) {
  const Eigen::Matrix3d shifted = m - e * Eigen::Matrix3d::Identity();
  const Eigen::Vector3d r0 = shifted.row(0).transpose();
  const Eigen::Vector3d r1 = shifted.row(1).transpose();
  const Eigen::Vector3d r2 = shifted.row(2).transpose();
  const std::array<Eigen::Vector3d, 3> candidates{r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  const auto best = std::max_element(candidates.begin(), candidates.end(),
                                     [](const auto& a, const auto& b) {
                                       return a.squaredNorm() < b.squaredNorm();
                                     });
  const double norm = best->norm();
  if (!(norm > 0.0)) throw InternalError("eigenvector construction produced a zero vector");
  return *best / norm;
}

void check_separation(const std::array<double, 3>& levels, double y) {
  const double gap = std::min(levels[1] - levels[0], levels[2] - levels[1]);
  if (gap < kDegeneracyGuard) throw NearDegeneracy(y, gap);
}

// Eigenvectors before any sign convention, orthonormalised by one Loewdin step.
AdiabaticPoint raw_eigenbasis(const ModelParams& params, double y) {
  AdiabaticPoint point;
  point.y = y;
  point.levels = eigenvalues_at(params, y);
  check_separation(point.levels, y);
  const Eigen::Matrix3d m = level_matrix(params, y);
  for (int j = 0; j < 3; ++j) point.basis.col(j) = null_vector(m, point.levels[static_cast<std::size_t>(j)]);
  const Eigen::Matrix3d gram = point.basis.transpose() * point.basis;
  point.basis = point.basis * (1.5 * Eigen::Matrix3d::Identity() - 0.5 * gram);
  return point;
}

double min_column_overlap(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return (a.transpose() * b).diagonal().minCoeff();
}

}  // namespace

Eigen::Matrix3d level_matrix(const ModelParams& params, double y) {
  const double c1 = std::numbers::sqrt2 * params.u() * y;
  const double c2 = std::numbers::sqrt2 * params.v() * y;
  Eigen::Matrix3d m;
  m << params.e1(), c1, 0.0,
       c1, params.e2(), c2,
       0.0, c2, params.e3();
  return m;
}

CubicCoefficients cubic_coefficients(const ModelParams& params, double y) {
  const double mean = (params.e1() + params.e2() + params.e3()) / 3.0;
  const double d1 = params.e1() - mean;
  const double d2 = params.e2() - mean;
  const double d3 = params.e3() - mean;
  const double c1sq = 2.0 * params.u() * params.u() * y * y;
  const double c2sq = 2.0 * params.v() * params.v() * y * y;

  CubicCoefficients c;
  c.alpha = 0.5 * (d1 * d1 + d2 * d2 + d3 * d3) + c1sq + c2sq;
  c.beta = d1 * d2 * d3 - d1 * c2sq - d3 * c1sq;
  c.amp = std::sqrt(4.0 * c.alpha / 3.0);
  if (c.amp < kMinAmplitude) {
    throw InvalidArgument("degenerate cubic: all three levels coincide");
  }
  double arg = -4.0 * c.beta / (c.amp * c.amp * c.amp);
  if (std::abs(arg) > 1.0 + kArcsinSlack) {
    throw InternalError("triple-angle argument outside [-1, 1]: " + std::to_string(arg));
  }
  arg = std::clamp(arg, -1.0, 1.0);
  c.theta = std::asin(arg);
  return c;
}

std::array<double, 3> eigenvalues_at(const ModelParams& params, double y) {
  // Uncoupled block: return the diagonal exactly instead of trig round-off.
  if (params.u() * y == 0.0 && params.v() * y == 0.0) return params.bare_levels();
  const CubicCoefficients c = cubic_coefficients(params, y);
  const double mean = (params.e1() + params.e2() + params.e3()) / 3.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::array<double, 3> e{mean + c.amp * std::sin(c.theta / 3.0),
                          mean + c.amp * std::sin((c.theta + two_pi) / 3.0),
                          mean + c.amp * std::sin((c.theta + 2.0 * two_pi) / 3.0)};
  std::sort(e.begin(), e.end());
  return e;
}

AdiabaticPoint eigenbasis_at(const ModelParams& params, double y) {
  AdiabaticPoint point = raw_eigenbasis(params, y);
  for (int j = 0; j < 2; ++j) {
    Eigen::Index largest = 0;
    point.basis.col(j).cwiseAbs().maxCoeff(&largest);
    if (point.basis(largest, j) < 0.0) point.basis.col(j) *= -1.0;
  }
  if (point.basis.determinant() < 0.0) point.basis.col(2) *= -1.0;
  return point;
}

AdiabaticPoint eigenbasis_at(const ModelParams& params, double y,
                             const Eigen::Matrix3d& reference) {
  AdiabaticPoint point = raw_eigenbasis(params, y);
  for (int j = 0; j < 3; ++j) {
    if (point.basis.col(j).dot(reference.col(j)) < 0.0) point.basis.col(j) *= -1.0;
  }
  return point;
}

std::vector<AdiabaticPoint> continuous_eigenbasis(const ModelParams& params,
                                                  std::span<const double> ys) {
  std::vector<std::size_t> order(ys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(ys[a]) < std::abs(ys[b]); });

  // Largest step the sweep may take: a fraction of the coordinate over which
  // the couplings become comparable to the smallest bare gap.
  const double gap = std::min(params.e2() - params.e1(), params.e3() - params.e2());
  const double coupling = std::numbers::sqrt2 * std::max(params.u(), params.v());
  const double max_step = coupling > 0.0 ? 0.5 * gap / coupling : INFINITY;

  std::vector<AdiabaticPoint> out(ys.size());
  AdiabaticPoint current = eigenbasis_at(params, 0.0);
  const Eigen::Matrix3d flip = parity_flip();

  for (std::size_t idx : order) {
    const double target = std::abs(ys[idx]);
    double step = std::min(target - current.y, max_step);
    int halvings = 0;
    while (current.y < target) {
      step = std::min(step, target - current.y);
      const double next_y = (target - current.y <= step) ? target : current.y + step;
      AdiabaticPoint next = eigenbasis_at(params, next_y, current.basis);
      if (min_column_overlap(current.basis, next.basis) < kContinuationOverlap) {
        step *= 0.5;
        if (++halvings > 60) {
          throw ConvergenceError("eigenbasis continuation stalled at y = " +
                                 std::to_string(current.y));
        }
        continue;
      }
      current = std::move(next);
      halvings = 0;
      step = std::min(2.0 * step, max_step);
    }
    AdiabaticPoint point = current;
    if (ys[idx] < 0.0) {
      point.y = ys[idx];
      point.basis = flip * point.basis * flip;
    }
    out[idx] = point;
  }
  return out;
}

AdiabaticPoint continuous_eigenbasis(const ModelParams& params, double y) {
  const std::array<double, 1> ys{y};
  return continuous_eigenbasis(params, ys).front();
}

}  // namespace ladder
