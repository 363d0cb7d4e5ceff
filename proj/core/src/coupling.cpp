#include "ladder/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ladder/errors.hpp"
#include "ladder/oscillator.hpp"
#include "ladder/trilevel.hpp"

#include "adiabatic_states.hpp"

namespace ladder {
namespace {

constexpr double kCouplingRelTol = 0.01;
constexpr int kHermiteExtraNodes = 64;

Eigen::Matrix3d central_difference(const ModelParams& params, const Eigen::Matrix3d& center,
                                   double y, double h) {
  const Eigen::Matrix3d plus = eigenbasis_at(params, y + h, center).basis;
  const Eigen::Matrix3d minus = eigenbasis_at(params, y - h, center).basis;
  return center.transpose() * (plus - minus) / (2.0 * h);
}

CouplingSample sample_from_center(const ModelParams& params, const AdiabaticPoint& center,
                                  double step) {
  const double y = center.y;
  const double h = step > 0.0 ? step : default_coupling_step(y);
  const Eigen::Matrix3d coarse = central_difference(params, center.basis, y, h);
  const Eigen::Matrix3d fine = central_difference(params, center.basis, y, 0.5 * h);
  const Eigen::Matrix3d extrapolated = (4.0 * fine - coarse) / 3.0;

  CouplingSample s;
  s.y = y;
  s.step = h;
  s.f12 = extrapolated(0, 1);
  s.f13 = extrapolated(0, 2);
  s.f23 = extrapolated(1, 2);
  s.error_estimate = (fine - coarse).cwiseAbs().maxCoeff() / 3.0;

  const double magnitude = std::max({std::abs(s.f12), std::abs(s.f13), std::abs(s.f23)});
  const double roundoff_floor = 64.0 * std::numeric_limits<double>::epsilon() / h;
  if (s.error_estimate > roundoff_floor && s.error_estimate > kCouplingRelTol * magnitude) {
    throw ConvergenceError("coupling functions unresolved at y = " + std::to_string(y) +
                           " (error estimate " + std::to_string(s.error_estimate) +
                           " vs magnitude " + std::to_string(magnitude) + ")");
  }
  return s;
}

// A_jk(y) = (U^T dU/dy)_jk sampled on a set of nodes.
std::vector<double> coupling_profile(const ModelParams& params, int j, int k,
                                     std::span<const double> ys) {
  const std::vector<CouplingSample> samples = coupling_functions(params, ys);
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [&](const CouplingSample& s) { return s.element(j, k); });
  return out;
}

std::vector<double> w_profile(const ModelParams& params, int j, std::span<const double> ys) {
  const std::vector<CouplingSample> samples = coupling_functions(params, ys);
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(), [&](const CouplingSample& s) {
    double sum = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const double a = s.element(j, k);
      sum += a * a;
    }
    return 0.5 * sum;
  });
  return out;
}

void check_request(const OscillatorMatrixElementRequest& req) {
  check_level(req.j);
  check_level(req.k);
  if (req.j == req.k) throw InvalidArgument("V couples distinct levels only (j == k)");
  if (req.n < 0 || req.m < 0) throw InvalidArgument("oscillator quantum numbers must be >= 0");
}

struct QuadratureValue {
  double value = 0.0;
  double magnitude = 0.0;  // sum of absolute contributions
};

// (1/2) sum_k w_k A(y_k) (phi_n' phi_m - phi_n phi_m') on a Gauss-Hermite rule.
QuadratureValue hermite_v(const ModelParams& params, const OscillatorMatrixElementRequest& req,
                          int order) {
  const GaussHermiteRule rule = gauss_hermite_rule(order);
  const std::vector<double> a = coupling_profile(params, req.j, req.k, rule.nodes);
  const int count = static_cast<int>(std::max(req.n, req.m)) + 2;
  const auto derivative = [](const std::vector<double>& phi, std::int64_t l) {
    const double dl = static_cast<double>(l);
    const double lower = l > 0 ? std::sqrt(0.5 * dl) * phi[static_cast<std::size_t>(l - 1)] : 0.0;
    return lower - std::sqrt(0.5 * (dl + 1.0)) * phi[static_cast<std::size_t>(l + 1)];
  };
  QuadratureValue q;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (a[i] == 0.0) continue;
    const std::vector<double> phi = hermite_functions(count, rule.nodes[i]);
    const double pn = phi[static_cast<std::size_t>(req.n)];
    const double pm = phi[static_cast<std::size_t>(req.m)];
    const double term = 0.5 * rule.weights[i] * a[i] *
                        (derivative(phi, req.n) * pm - pn * derivative(phi, req.m));
    q.value += term;
    q.magnitude += std::abs(term);
  }
  return q;
}

QuadratureValue hermite_diagonal(const ModelParams& params, int j, std::int64_t n, int order) {
  const GaussHermiteRule rule = gauss_hermite_rule(order);
  const std::vector<double> g = w_profile(params, j, rule.nodes);
  QuadratureValue q;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (g[i] == 0.0) continue;
    const std::vector<double> phi = hermite_functions(static_cast<int>(n) + 1, rule.nodes[i]);
    const double p = phi[static_cast<std::size_t>(n)];
    const double term = rule.weights[i] * g[i] * p * p;
    q.value += term;
    q.magnitude += std::abs(term);
  }
  return q;
}

FockDvr window_for(std::int64_t lo, std::int64_t hi, std::int64_t padding) {
  return FockDvr(std::max<std::int64_t>(0, lo - padding), hi + padding);
}

QuadratureValue fock_v(const ModelParams& params, const OscillatorMatrixElementRequest& req,
                       std::int64_t padding) {
  const FockDvr dvr = window_for(std::min(req.n, req.m), std::max(req.n, req.m), padding);
  const std::vector<double> a = coupling_profile(params, req.j, req.k, dvr.nodes());
  // -(1/2) <n| D A + A D |m>, D = d/dy is nonzero only one step off the diagonal.
  // Each DVR element is bounded by max |A|, which sets the round-off scale.
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  QuadratureValue q;
  const auto add = [&](double d, double element) {
    q.value += -0.5 * d * element;
    q.magnitude += 0.5 * std::abs(d) * peak;
  };
  for (std::int64_t l : {req.n - 1, req.n + 1}) {
    if (l < 0) continue;
    add(derivative_element(req.n, l), dvr.matrix_element(a, l, req.m));
  }
  for (std::int64_t l : {req.m - 1, req.m + 1}) {
    if (l < 0) continue;
    add(derivative_element(l, req.m), dvr.matrix_element(a, req.n, l));
  }
  return q;
}

QuadratureValue fock_diagonal(const ModelParams& params, int j, std::int64_t n,
                              std::int64_t padding) {
  const FockDvr dvr = window_for(n, n, padding);
  const std::vector<double> g = w_profile(params, j, dvr.nodes());
  const double value = dvr.matrix_element(g, n, n);
  return {value, std::abs(value)};
}

// <u_{j,n}| -(1/2)(D A + A D) |u_{k,m}> on one DVR window; nullopt when a
// state does not fit the window.
std::optional<QuadratureValue> adiabatic_v(const ModelParams& params, int j, int k,
                                           std::int64_t n, std::int64_t m, std::int64_t reach) {
  const FockDvr dvr = window_for(std::min(n, m), std::max(n, m), reach);
  const std::vector<double>& nodes = dvr.nodes();
  std::vector<double> ej(nodes.size());
  std::vector<double> ek(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const std::array<double, 3> e = eigenvalues_at(params, nodes[q]);
    ej[q] = e[static_cast<std::size_t>(j - 1)];
    ek[q] = e[static_cast<std::size_t>(k - 1)];
  }
  std::optional<Eigen::VectorXd> ua = detail::adiabatic_oscillator_state(dvr, ej, n);
  std::optional<Eigen::VectorXd> ub = detail::adiabatic_oscillator_state(dvr, ek, m);
  if (!ua || !ub) return std::nullopt;
  for (Eigen::VectorXd* u : {&*ua, &*ub}) {
    Eigen::Index peak = 0;
    u->cwiseAbs().maxCoeff(&peak);
    if ((*u)[peak] < 0.0) *u = -*u;
  }

  const std::vector<double> profile = coupling_profile(params, j, k, nodes);
  double peak = 0.0;
  for (double v : profile) peak = std::max(peak, std::abs(v));
  const Eigen::MatrixXd a = dvr.matrix(profile);
  const auto size = static_cast<Eigen::Index>(dvr.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index r = 0; r + 1 < size; ++r) {
    const std::int64_t l = dvr.first() + r;
    d(r, r + 1) = derivative_element(l, l + 1);
    d(r + 1, r) = derivative_element(l + 1, l);
  }
  const Eigen::MatrixXd v = -0.5 * (d * a + a * d);
  QuadratureValue q;
  q.value = ua->dot(v * *ub);
  q.magnitude = std::max(ua->cwiseAbs().dot(v.cwiseAbs() * ub->cwiseAbs()),
                         peak * std::sqrt(static_cast<double>(std::max(n, m)) + 1.0));
  return q;
}

template <typename Eval>
double converged(Eval&& eval, double rel_tol, const char* what) {
  const QuadratureValue base = eval(1);
  const QuadratureValue doubled = eval(2);
  const double diff = std::abs(doubled.value - base.value);
  const double floor = 1e-11 * std::max(base.magnitude, doubled.magnitude);
  if (diff > rel_tol * std::abs(doubled.value) + floor) {
    throw ConvergenceError(std::string(what) + " not converged: relative change " +
                           std::to_string(diff / std::abs(doubled.value)));
  }
  return doubled.value;
}

std::int64_t default_padding(std::int64_t distance, const MatrixElementOptions& options) {
  return options.padding > 0 ? options.padding : 4 * distance + 64;
}

}  // namespace

double CouplingSample::element(int j, int k) const {
  check_level(j);
  check_level(k);
  if (j == k) return 0.0;
  const int lo = std::min(j, k);
  const int hi = std::max(j, k);
  const double upper = (lo == 1 && hi == 2) ? f12 : (lo == 1 ? f13 : f23);
  return j < k ? upper : -upper;
}

Eigen::Matrix3d CouplingSample::matrix() const {
  Eigen::Matrix3d a;
  a << 0.0, f12, f13,
       -f12, 0.0, f23,
       -f13, -f23, 0.0;
  return a;
}

double default_coupling_step(double y) { return 1e-4 * std::max(1.0, std::abs(y)); }

CouplingSample coupling_functions(const ModelParams& params, double y, double step) {
  return sample_from_center(params, continuous_eigenbasis(params, y), step);
}

std::vector<CouplingSample> coupling_functions(const ModelParams& params,
                                               std::span<const double> ys) {
  const std::vector<AdiabaticPoint> centers = continuous_eigenbasis(params, ys);
  std::vector<CouplingSample> out;
  out.reserve(centers.size());
  for (const AdiabaticPoint& c : centers) out.push_back(sample_from_center(params, c, 0.0));
  return out;
}

Eigen::Matrix3d basis_derivative_products(const ModelParams& params, double y, double step) {
  if (!(step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  return central_difference(params, continuous_eigenbasis(params, y).basis, y, step);
}

MatrixElementMethod parse_matrix_element_method(std::string_view name) {
  if (name == "hermite-quadrature") return MatrixElementMethod::hermite_quadrature;
  if (name == "fock-window") return MatrixElementMethod::fock_window;
  throw InvalidArgument("unsupported matrix-element method '" + std::string(name) + "'");
}

std::string_view to_string(MatrixElementMethod method) {
  switch (method) {
    case MatrixElementMethod::hermite_quadrature:
      return "hermite-quadrature";
    case MatrixElementMethod::fock_window:
      return "fock-window";
  }
  return "unknown";
}

double v_matrix_element(const ModelParams& params, const OscillatorMatrixElementRequest& req,
                        const MatrixElementOptions& options) {
  check_request(req);
  if (params.u() == 0.0 && params.v() == 0.0) return 0.0;
  switch (req.method) {
    case MatrixElementMethod::hermite_quadrature: {
      const std::int64_t top = std::max(req.n, req.m);
      if (top > kMaxHermiteQuantum) {
        throw InvalidArgument("hermite-quadrature supports quantum numbers up to " +
                              std::to_string(kMaxHermiteQuantum));
      }
      const int order = static_cast<int>(2 * top) + kHermiteExtraNodes;
      return converged([&](int factor) { return hermite_v(params, req, factor * order); },
                       options.rel_tol, "V matrix element (hermite-quadrature)");
    }
    case MatrixElementMethod::fock_window: {
      const std::int64_t padding = default_padding(std::abs(req.n - req.m), options);
      return converged([&](int factor) { return fock_v(params, req, factor * padding); },
                       options.rel_tol, "V matrix element (fock-window)");
    }
  }
  throw InvalidArgument("unsupported matrix-element method");
}

std::array<double, 3> w_expectation(const ModelParams& params, std::int64_t n,
                                    MatrixElementMethod method,
                                    const MatrixElementOptions& options) {
  if (n < 0) throw InvalidArgument("oscillator quantum number must be >= 0");
  std::array<double, 3> out{};
  if (params.u() == 0.0 && params.v() == 0.0) return out;
  for (int j = 1; j <= 3; ++j) {
    double value = 0.0;
    if (method == MatrixElementMethod::hermite_quadrature) {
      if (n > kMaxHermiteQuantum) {
        throw InvalidArgument("hermite-quadrature supports quantum numbers up to " +
                              std::to_string(kMaxHermiteQuantum));
      }
      const int order = static_cast<int>(2 * n) + kHermiteExtraNodes;
      value = converged([&](int factor) { return hermite_diagonal(params, j, n, factor * order); },
                        options.rel_tol, "W expectation (hermite-quadrature)");
    } else {
      const std::int64_t padding = default_padding(0, options);
      value = converged([&](int factor) { return fock_diagonal(params, j, n, factor * padding); },
                        options.rel_tol, "W expectation (fock-window)");
    }
    out[static_cast<std::size_t>(j - 1)] = value;
  }
  return out;
}

double adiabatic_v_element(const ModelParams& params, int j, int k, std::int64_t n,
                           std::int64_t m, const MatrixElementOptions& options) {
  check_request({j, k, n, m, MatrixElementMethod::fock_window});
  if (params.u() == 0.0 && params.v() == 0.0) return 0.0;
  std::int64_t reach = options.padding > 0 ? options.padding : detail::kAdiabaticReach;
  std::optional<QuadratureValue> base;
  for (; reach <= detail::kMaxAdiabaticReach; reach *= 2) {
    base = adiabatic_v(params, j, k, n, m, reach);
    if (base) break;
  }
  if (!base) throw ConvergenceError("adiabatic oscillator states do not fit the largest window");
  const std::optional<QuadratureValue> doubled = adiabatic_v(params, j, k, n, m, 2 * reach);
  if (!doubled) throw ConvergenceError("adiabatic oscillator state lost on the doubled window");
  const double diff = std::abs(doubled->value - base->value);
  const double floor = 1e-11 * std::max(base->magnitude, doubled->magnitude);
  if (diff > options.rel_tol * std::abs(doubled->value) + floor) {
    throw ConvergenceError("adiabatic V matrix element not converged: relative change " +
                           std::to_string(diff / std::abs(doubled->value)));
  }
  return doubled->value;
}

}  // namespace ladder
