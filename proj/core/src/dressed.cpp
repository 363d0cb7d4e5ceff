#include "ladder/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ladder/errors.hpp"
#include "ladder/trilevel.hpp"
#include "lapack_support.hpp"

namespace ladder {
namespace {

// Mean of E_j over the N Chebyshev nodes of [-a, a]. E_j is even in y, so
// only the positive half of the (symmetric, N even) node set is evaluated.
std::array<double, 3> chebyshev_average(const ModelParams& params, double a, int nodes) {
  std::array<double, 3> sum{};
  const int half = nodes / 2;
  for (int k = 0; k < half; ++k) {
    const double y = a * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * nodes));
    const std::array<double, 3> e = eigenvalues_at(params, y);
    const double gap = std::min(e[1] - e[0], e[2] - e[1]);
    if (gap < kDegeneracyGuard) throw NearDegeneracy(y, gap);
    for (std::size_t j = 0; j < 3; ++j) sum[j] += e[j];
  }
  for (double& s : sum) s /= half;
  return sum;
}

void check_quanta(int quanta) {
  if (quanta <= 0 || quanta % 2 == 0) {
    throw InvalidArgument("resonances exchange an odd, positive number of quanta (got " +
                          std::to_string(quanta) + ")");
  }
}

struct FdSolution {
  double eigenvalue = 0.0;
  int sign_changes = 0;
};

FdSolution fd_solve(const std::function<double(double)>& potential, std::int64_t n,
                    double half_width, std::size_t intervals, bool count_nodes) {
  const double h = 2.0 * half_width / static_cast<double>(intervals);
  const std::size_t points = intervals - 1;
  if (points <= static_cast<std::size_t>(n)) {
    throw InvalidArgument("finite-difference grid has fewer points than the requested level");
  }
  const double kinetic = 1.0 / (h * h);
  std::vector<double> diag(points);
  std::vector<double> off(points - 1, -0.5 * kinetic);
  for (std::size_t i = 0; i < points; ++i) {
    const double y = -half_width + static_cast<double>(i + 1) * h;
    diag[i] = potential(y) + 0.5 * y * y + kinetic;
  }
  const auto index = static_cast<std::size_t>(n);
  if (!count_nodes) {
    // Eigenvalues only: bisection is enough.
    const detail::Eigensystem es = detail::tridiagonal_eigenpairs_by_index(diag, off, index, index);
    return {es.values.front(), -1};
  }
  const detail::Eigensystem es = detail::tridiagonal_eigenpairs_by_index(diag, off, index, index);
  double peak = 0.0;
  for (std::size_t i = 0; i < points; ++i) peak = std::max(peak, std::abs(es.vector(i, 0)));
  int changes = 0;
  double last_sign = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double v = es.vector(i, 0);
    if (std::abs(v) < 1e-8 * peak) continue;
    const double s = v > 0.0 ? 1.0 : -1.0;
    if (last_sign != 0.0 && s != last_sign) ++changes;
    last_sign = s;
  }
  return {es.values.front(), changes};
}

template <typename Residual>
double bisect(Residual&& f, double a, double b, double fa, double tolerance) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::isnan(fm)) return fm;
    if (std::abs(fm) <= tolerance || (b - a) <= 1e-15 * std::max(1.0, std::abs(mid))) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  throw ConvergenceError("bisection did not reach the residual tolerance");
}

// All sign-change roots of f on the samples ts (ascending). NaN samples
// (unevaluable points) break the bracketing on both sides.
template <typename Residual>
std::vector<double> roots_on_samples(Residual&& f, const std::vector<double>& ts,
                                     double tolerance) {
  std::vector<double> roots;
  double prev_t = ts.front();
  double prev_f = f(prev_t);
  if (prev_f == 0.0) roots.push_back(prev_t);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double t = ts[i];
    const double ft = f(t);
    if (ft == 0.0) {
      roots.push_back(t);
    } else if (!std::isnan(ft) && !std::isnan(prev_f) && prev_f != 0.0 &&
               (ft < 0.0) != (prev_f < 0.0)) {
      const double root = bisect(f, prev_t, t, prev_f, tolerance);
      if (!std::isnan(root)) roots.push_back(root);
    }
    prev_t = t;
    prev_f = ft;
  }
  return roots;
}

}  // namespace

std::string_view to_string(DressedMethod method) {
  return method == DressedMethod::wkb ? "wkb" : "fd";
}

namespace {

std::array<double, 3> converged_averages(const ModelParams& params, std::int64_t n,
                                         const WkbOptions& options, int& used) {
  if (n < 0) throw InvalidArgument("oscillator quantum number must be >= 0");
  if (options.initial_nodes < 16) throw InvalidArgument("WKB quadrature needs >= 16 nodes");
  const double a = std::sqrt(2.0 * static_cast<double>(n) + 1.0);
  int nodes = options.initial_nodes + options.initial_nodes % 2;
  std::array<double, 3> previous = chebyshev_average(params, a, nodes);
  while (nodes < options.max_nodes) {
    nodes *= 2;
    const std::array<double, 3> current = chebyshev_average(params, a, nodes);
    double change = 0.0;
    for (std::size_t j = 0; j < 3; ++j) change = std::max(change, std::abs(current[j] - previous[j]));
    previous = current;
    if (change <= options.tolerance) {
      used = nodes;
      return current;
    }
  }
  throw ConvergenceError("WKB quadrature not converged with " + std::to_string(nodes) + " nodes");
}

}  // namespace

std::array<double, 3> wkb_dressed_energies(const ModelParams& params, std::int64_t n,
                                           const WkbOptions& options) {
  int used = 0;
  return converged_averages(params, n, options, used);
}

DressedLevel wkb_dressed_energy(const ModelParams& params, int j, std::int64_t n,
                                const WkbOptions& options) {
  check_level(j);
  int used = 0;
  const std::array<double, 3> e = converged_averages(params, n, options, used);
  return {j, n, e[static_cast<std::size_t>(j - 1)], DressedMethod::wkb, used};
}

double dressed_transition(const ModelParams& params, int j, int k, std::int64_t n,
                          const WkbOptions& options) {
  check_level(j);
  check_level(k);
  if (j == k) return 0.0;
  const std::array<double, 3> e = wkb_dressed_energies(params, n, options);
  return e[static_cast<std::size_t>(k - 1)] - e[static_cast<std::size_t>(j - 1)];
}

DressedLevel h0_level_fd(const std::function<double(double)>& potential, std::int64_t n,
                         const FdGrid& grid) {
  if (n < 0) throw InvalidArgument("oscillator quantum number must be >= 0");
  const double turning = std::sqrt(2.0 * static_cast<double>(n) + 1.0);
  const double half_width = std::max(grid.extent_factor * turning, turning + grid.min_margin);
  const double spacing = grid.spacing > 0.0 ? grid.spacing : std::min(0.02, 0.1 / turning);
  const auto intervals = static_cast<std::size_t>(std::ceil(2.0 * half_width / spacing));

  const FdSolution coarse = fd_solve(potential, n, half_width, intervals, true);
  if (coarse.sign_changes != n) {
    throw ConvergenceError("finite-difference eigenvector has " +
                           std::to_string(coarse.sign_changes) + " nodes, expected " +
                           std::to_string(n));
  }
  const double mid = fd_solve(potential, n, half_width, 2 * intervals, false).eigenvalue;
  const double fine = fd_solve(potential, n, half_width, 4 * intervals, false).eigenvalue;

  const double first_a = (4.0 * mid - coarse.eigenvalue) / 3.0;
  const double first_b = (4.0 * fine - mid) / 3.0;
  const double second = (16.0 * first_b - first_a) / 15.0;
  if (std::abs(second - first_b) > grid.tolerance) {
    throw ConvergenceError("finite-difference grid too coarse: refinement moves the level by " +
                           std::to_string(std::abs(second - first_b)));
  }
  DressedLevel level;
  level.n = n;
  level.energy = second - 0.5 - static_cast<double>(n);
  level.method = DressedMethod::fd;
  level.resolution = static_cast<std::int64_t>(4 * intervals);
  return level;
}

DressedLevel h0_level_fd(const ModelParams& params, int j, std::int64_t n, const FdGrid& grid) {
  check_level(j);
  const auto index = static_cast<std::size_t>(j - 1);
  DressedLevel level = h0_level_fd(
      [&](double y) { return eigenvalues_at(params, y)[index]; }, n, grid);
  level.level = j;
  return level;
}

std::vector<double> resonance_on_line(const ModelParams& templ, int j, int k, int quanta,
                                      double ratio, double g1_max, int samples,
                                      const WkbOptions& options) {
  check_quanta(quanta);
  if (!(g1_max > 0.0) || samples < 2) throw InvalidArgument("invalid line search range");
  const auto residual = [&](double g1) {
    return dressed_transition(templ.with_couplings(g1, ratio * g1), j, k, templ.n0(), options) -
           quanta;
  };
  std::vector<double> ts(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) ts[static_cast<std::size_t>(i)] = g1_max * (i + 1) / samples;
  return roots_on_samples(residual, ts, kContourTolerance);
}

ResonanceContour resonance_contour(const ModelParams& templ, int j, int k, int quanta,
                                   const RaySet& rays, const WkbOptions& options) {
  check_level(j);
  check_level(k);
  if (j == k) throw InvalidArgument("a resonance needs two distinct levels");
  check_quanta(quanta);
  if (rays.rays < 1 || rays.samples_per_ray < 2 || !(rays.max_g > 0.0)) {
    throw InvalidArgument("invalid ray set");
  }

  // Points where a quadrature node hits an exact level crossing (e.g. g1 = 0
  // for levels 1 and 2) are skipped.
  const auto residual_at = [&](double g1, double g2) {
    try {
      return dressed_transition(templ.with_couplings(g1, g2), j, k, templ.n0(), options) - quanta;
    } catch (const NearDegeneracy&) {
      return std::nan("");
    }
  };

  ResonanceContour contour;
  contour.j = j;
  contour.k = k;
  contour.quanta = quanta;

  const double origin = residual_at(0.0, 0.0);
  if (std::abs(origin) <= kContourTolerance) contour.points.push_back({0.0, 0.0, origin, false});

  const double span = rays.angle_end - rays.angle_begin;
  for (int r = 0; r < rays.rays; ++r) {
    const double angle =
        rays.rays == 1 ? rays.angle_begin : rays.angle_begin + span * r / (rays.rays - 1);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const auto along = [&](double radius) { return residual_at(radius * c, radius * s); };
    std::vector<double> ts(static_cast<std::size_t>(rays.samples_per_ray));
    for (int i = 0; i < rays.samples_per_ray; ++i) {
      ts[static_cast<std::size_t>(i)] = rays.max_g * (i + 1) / rays.samples_per_ray;
    }
    const std::vector<double> roots = roots_on_samples(along, ts, kContourTolerance);
    if (roots.empty()) contour.missed_ray_angles.push_back(angle);
    for (double radius : roots) {
      contour.points.push_back({radius * c, radius * s, along(radius), roots.size() > 1});
    }
  }

  for (double radius : rays.arc_radii) {
    if (!(radius > 0.0) || rays.samples_per_arc < 2) continue;
    const auto around = [&](double angle) {
      return residual_at(radius * std::cos(angle), radius * std::sin(angle));
    };
    std::vector<double> ts(static_cast<std::size_t>(rays.samples_per_arc) + 1);
    for (int i = 0; i <= rays.samples_per_arc; ++i) {
      ts[static_cast<std::size_t>(i)] = rays.angle_begin + span * i / rays.samples_per_arc;
    }
    const std::vector<double> roots = roots_on_samples(around, ts, kContourTolerance);
    for (double angle : roots) {
      contour.points.push_back({radius * std::cos(angle), radius * std::sin(angle), around(angle),
                                roots.size() > 1});
    }
  }

  std::sort(contour.points.begin(), contour.points.end(),
            [](const ContourPoint& a, const ContourPoint& b) {
              const double ta = std::atan2(a.g2, a.g1);
              const double tb = std::atan2(b.g2, b.g1);
              if (ta != tb) return ta < tb;
              return std::hypot(a.g1, a.g2) < std::hypot(b.g1, b.g2);
            });
  return contour;
}

}  // namespace ladder
