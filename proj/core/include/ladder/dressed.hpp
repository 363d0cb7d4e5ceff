#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "ladder/model.hpp"

namespace ladder {

enum class DressedMethod { wkb, fd };
std::string_view to_string(DressedMethod method);

/// Oscillator-averaged energy of level j for occupation n, with the n*hbar*omega0
/// ladder removed.
struct DressedLevel {
  int level = 1;
  std::int64_t n = 0;
  double energy = 0.0;
  DressedMethod method = DressedMethod::wkb;
  /// Quadrature nodes (wkb) or finest grid points (fd) actually used.
  std::int64_t resolution = 0;
};

struct WkbOptions {
  int initial_nodes = 256;
  int max_nodes = 1 << 22;
  /// Stop when doubling the node count moves the result by at most this.
  double tolerance = 1e-9;
};

/// (1/pi) int_{-a}^{a} E_j(y) / sqrt(a^2 - y^2) dy with a = sqrt(2n+1),
/// by Chebyshev-Gauss quadrature (the weight is exactly the Chebyshev one).
/// Throws ConvergenceError when max_nodes is reached and NearDegeneracy if a
/// node lands on a (near) level crossing.
DressedLevel wkb_dressed_energy(const ModelParams& params, int j, std::int64_t n,
                                const WkbOptions& options = {});

/// All three WKB dressed energies on one shared set of nodes.
std::array<double, 3> wkb_dressed_energies(const ModelParams& params, std::int64_t n,
                                           const WkbOptions& options = {});

/// E_k - E_j from WKB dressed energies at occupation n.
double dressed_transition(const ModelParams& params, int j, int k, std::int64_t n,
                          const WkbOptions& options = {});

struct FdGrid {
  /// Coarsest spacing; <= 0 selects min(0.02, 0.1/sqrt(2n+1)).
  double spacing = 0.0;
  /// Half-width of the grid in units of the turning point sqrt(2n+1).
  double extent_factor = 1.5;
  /// Minimum half-width beyond the turning point, in y units.
  double min_margin = 6.0;
  /// Agreement required between the last two Richardson estimates.
  double tolerance = 1e-6;
};

/// Brute-force solution of the single-level problem
///   (E + 1/2) u = [ potential(y) + (1/2)(-d^2/dy^2 + y^2) ] u
/// by three-point finite differences at spacings h, h/2, h/4 combined by
/// Richardson extrapolation. The eigenvalue with exactly n interior sign
/// changes is selected (and checked by node counting); returns E - n.
/// Throws ConvergenceError when the extrapolated estimates disagree by more
/// than grid.tolerance or the node count does not match.
DressedLevel h0_level_fd(const std::function<double(double)>& potential, std::int64_t n,
                         const FdGrid& grid = {});

/// h0_level_fd with potential E_j(y) of the three-level block.
DressedLevel h0_level_fd(const ModelParams& params, int j, std::int64_t n,
                         const FdGrid& grid = {});

/// Rays from the origin of the (g1, g2) quadrant plus optional small arcs
/// around the origin (arcs resolve contours that emanate from g = 0, which
/// every ray meets only at r = 0).
struct RaySet {
  int rays = 181;
  double angle_begin = 0.0;
  double angle_end = 1.5707963267948966;
  double max_g = 1.25;
  int samples_per_ray = 250;
  std::vector<double> arc_radii{5e-4, 2e-3, 1e-2};
  int samples_per_arc = 360;
};

struct ContourPoint {
  double g1 = 0.0;
  double g2 = 0.0;
  double residual = 0.0;
  /// The ray (or arc) crossed the contour more than once.
  bool multiple = false;
};

struct ResonanceContour {
  int j = 1;
  int k = 2;
  int quanta = 11;
  std::vector<ContourPoint> points;  // ordered by polar angle, then radius
  std::vector<double> missed_ray_angles;
};

inline constexpr double kContourTolerance = 1e-6;

/// Contour E_k(g1,g2) - E_j(g1,g2) = quanta (WKB dressed energies at the
/// template's n0) in the (g1, g2) plane. `quanta` must be odd and positive.
ResonanceContour resonance_contour(const ModelParams& templ, int j, int k, int quanta,
                                   const RaySet& rays = {}, const WkbOptions& options = {});

/// Root of the resonance residual along the ray g2 = ratio * g1, searching
/// g1 in (0, g1_max]. Returns all roots in ascending g1.
std::vector<double> resonance_on_line(const ModelParams& templ, int j, int k, int quanta,
                                      double ratio, double g1_max, int samples = 200,
                                      const WkbOptions& options = {});

}  // namespace ladder
