#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ladder {

/// Normalised harmonic-oscillator eigenfunctions phi_0 .. phi_{count-1} at y.
/// The upward recurrence is carried in scaled form, so values are correct
/// wherever they are representable (deep in the classically forbidden region
/// they flush to zero instead of poisoning the recurrence).
std::vector<double> hermite_functions(int count, double y);

/// Gauss-Hermite rule of the given order in exponentially scaled form:
/// integral f(y) dy ~= sum_k weights[k] * f(nodes[k]) for f that already
/// carries the Gaussian factor (products of oscillator eigenfunctions).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_rule(int order);

/// Matrix elements of the oscillator coordinate and its derivative between
/// number states, with y = (a + a^dagger)/sqrt(2), d/dy = (a - a^dagger)/sqrt(2).
double position_element(std::int64_t row, std::int64_t col);
double derivative_element(std::int64_t row, std::int64_t col);

/// Discrete-variable representation of the oscillator coordinate on a window
/// of number states [first, last]: the windowed position matrix is
/// diagonalised, its eigenvalues serve as nodes and a function f(y) is
/// represented as S diag(f(nodes)) S^T. Matrix elements well inside the
/// window converge exponentially in the distance to the window edge.
class FockDvr {
 public:
  FockDvr(std::int64_t first, std::int64_t last);

  std::int64_t first() const noexcept { return first_; }
  std::int64_t last() const noexcept { return first_ + static_cast<std::int64_t>(size_) - 1; }
  std::size_t size() const noexcept { return size_; }
  bool contains(std::int64_t n) const noexcept { return n >= first_ && n <= last(); }

  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// <row| f(y) |col> for absolute occupation numbers inside the window.
  double matrix_element(std::span<const double> f_at_nodes, std::int64_t row,
                        std::int64_t col) const;

  /// The column f(y)|col> over the whole window.
  Eigen::VectorXd apply(std::span<const double> f_at_nodes, std::int64_t col) const;

  /// The whole windowed matrix S diag(f) S^T.
  Eigen::MatrixXd matrix(std::span<const double> f_at_nodes) const;

  /// Column k holds the number-state components of node k.
  const Eigen::MatrixXd& transform() const noexcept { return transform_; }

 private:
  std::size_t local(std::int64_t n) const;

  std::int64_t first_;
  std::size_t size_;
  std::vector<double> nodes_;
  Eigen::MatrixXd transform_;  // column k is the eigenvector of node k
};

}  // namespace ladder
