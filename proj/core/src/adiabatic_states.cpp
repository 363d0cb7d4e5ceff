#include "adiabatic_states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace ladder::detail {
namespace {

constexpr Eigen::Index kEdgeStates = 16;
constexpr double kEdgeWeight = 1e-12;

}  // namespace

std::optional<Eigen::VectorXd> adiabatic_oscillator_state(const FockDvr& dvr,
                                                          std::span<const double> level_at_nodes,
                                                          std::int64_t n) {
  const auto size = static_cast<Eigen::Index>(dvr.size());
  Eigen::MatrixXd h0 = dvr.matrix(level_at_nodes);
  Eigen::VectorXd shift(size);
  for (Eigen::Index r = 0; r < size; ++r) {
    shift[r] = static_cast<double>(dvr.first() + r - n);
    h0(r, r) += shift[r];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h0);
  const Eigen::MatrixXd& vecs = solver.eigenvectors();

  Eigen::Index pick = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < size; ++c) {
    const double mean = vecs.col(c).cwiseAbs2().dot(shift);
    if (std::abs(mean) < best) {
      best = std::abs(mean);
      pick = c;
    }
  }
  const Eigen::VectorXd u = vecs.col(pick);
  const Eigen::Index margin = std::min<Eigen::Index>(kEdgeStates, size / 4);
  double edge = u.tail(margin).squaredNorm();
  if (dvr.first() > 0) edge += u.head(margin).squaredNorm();
  if (edge > kEdgeWeight || best > 0.5) return std::nullopt;
  return u;
}

}  // namespace ladder::detail
