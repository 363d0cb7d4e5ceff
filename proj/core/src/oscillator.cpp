#include "ladder/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ladder/errors.hpp"
#include "lapack_support.hpp"

namespace ladder {

std::vector<double> hermite_functions(int count, double y) {
  if (count <= 0) return {};
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);

  std::vector<double> out(static_cast<std::size_t>(count));
  double log_scale = -0.5 * y * y - 0.25 * std::log(std::numbers::pi);
  double scale = std::exp(log_scale);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = cur * scale;
  for (int l = 0; l + 1 < count; ++l) {
    const double dl = static_cast<double>(l);
    double next = std::sqrt(2.0 / (dl + 1.0)) * y * cur - std::sqrt(dl / (dl + 1.0)) * prev;
    if (std::abs(next) > kRescale) {
      next /= kRescale;
      cur /= kRescale;
      log_scale += log_rescale;
      scale = std::exp(log_scale);
    }
    prev = cur;
    cur = next;
    out[static_cast<std::size_t>(l + 1)] = cur * scale;
  }
  return out;
}

GaussHermiteRule gauss_hermite_rule(int order) {
  if (order < 1) throw InvalidArgument("Gauss-Hermite order must be positive");
  const auto n = static_cast<std::size_t>(order);
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k + 1 < n; ++k) off[k] = std::sqrt(0.5 * static_cast<double>(k + 1));

  GaussHermiteRule rule;
  rule.nodes = detail::tridiagonal_eigenvalues(std::move(diag), std::move(off));
  rule.weights.resize(n);
  const double root_2n = std::sqrt(2.0 * static_cast<double>(order));
  for (std::size_t k = 0; k < n; ++k) {
    double y = rule.nodes[k];
    for (int iter = 0; iter < 2; ++iter) {
      const std::vector<double> phi = hermite_functions(order + 1, y);
      const double slope = root_2n * phi[n - 1] - y * phi[n];
      if (slope != 0.0) y -= phi[n] / slope;
    }
    rule.nodes[k] = y;
    const std::vector<double> phi = hermite_functions(order, y);
    double christoffel = 0.0;
    for (double p : phi) christoffel += p * p;
    rule.weights[k] = 1.0 / christoffel;
  }
  // Exact mirror symmetry, so odd integrands cancel to round-off.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const std::size_t m = n - 1 - k;
    const double y = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[m]);
    rule.nodes[k] = -y;
    rule.nodes[m] = y;
    rule.weights[k] = rule.weights[m] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double position_element(std::int64_t row, std::int64_t col) {
  if (col == row + 1) return std::sqrt(0.5 * static_cast<double>(col));
  if (row == col + 1) return std::sqrt(0.5 * static_cast<double>(row));
  return 0.0;
}

double derivative_element(std::int64_t row, std::int64_t col) {
  if (col == row + 1) return std::sqrt(0.5 * static_cast<double>(col));
  if (row == col + 1) return -std::sqrt(0.5 * static_cast<double>(row));
  return 0.0;
}

FockDvr::FockDvr(std::int64_t first, std::int64_t last) : first_(first) {
  if (first < 0 || last < first) {
    throw InvalidArgument("invalid Fock window [" + std::to_string(first) + ", " +
                          std::to_string(last) + "]");
  }
  size_ = static_cast<std::size_t>(last - first + 1);
  std::vector<double> diag(size_, 0.0);
  std::vector<double> off(size_ > 0 ? size_ - 1 : 0);
  for (std::size_t i = 0; i + 1 < size_; ++i) {
    off[i] = position_element(first + static_cast<std::int64_t>(i),
                              first + static_cast<std::int64_t>(i) + 1);
  }
  detail::Eigensystem es = detail::tridiagonal_eigensystem(std::move(diag), std::move(off));
  nodes_ = std::move(es.values);
  transform_ = Eigen::Map<const Eigen::MatrixXd>(es.vectors.data(),
                                                 static_cast<Eigen::Index>(size_),
                                                 static_cast<Eigen::Index>(size_));
}

std::size_t FockDvr::local(std::int64_t n) const {
  if (!contains(n)) {
    throw InvalidArgument("occupation " + std::to_string(n) + " outside Fock window");
  }
  return static_cast<std::size_t>(n - first_);
}

double FockDvr::matrix_element(std::span<const double> f_at_nodes, std::int64_t row,
                               std::int64_t col) const {
  if (f_at_nodes.size() != size_) throw InvalidArgument("function sample count != node count");
  const auto r = static_cast<Eigen::Index>(local(row));
  const auto c = static_cast<Eigen::Index>(local(col));
  double sum = 0.0;
  for (std::size_t k = 0; k < size_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    sum += transform_(r, kk) * f_at_nodes[k] * transform_(c, kk);
  }
  return sum;
}

Eigen::VectorXd FockDvr::apply(std::span<const double> f_at_nodes, std::int64_t col) const {
  if (f_at_nodes.size() != size_) throw InvalidArgument("function sample count != node count");
  const auto c = static_cast<Eigen::Index>(local(col));
  const Eigen::Map<const Eigen::VectorXd> f(f_at_nodes.data(), static_cast<Eigen::Index>(size_));
  const Eigen::VectorXd weighted = f.cwiseProduct(transform_.row(c).transpose());
  return transform_ * weighted;
}

Eigen::MatrixXd FockDvr::matrix(std::span<const double> f_at_nodes) const {
  if (f_at_nodes.size() != size_) throw InvalidArgument("function sample count != node count");
  const Eigen::Map<const Eigen::VectorXd> f(f_at_nodes.data(), static_cast<Eigen::Index>(size_));
  return transform_ * f.asDiagonal() * transform_.transpose();
}

}  // namespace ladder
