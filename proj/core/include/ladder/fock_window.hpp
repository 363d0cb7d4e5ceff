#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ladder/model.hpp"

namespace ladder {

/// Conserved parity of (level index + oscillator occupation).
enum class Parity { even, odd, both };

Parity parity_of(int level, std::int64_t n);

struct BasisLabel {
  int level = 1;
  std::int64_t n = 0;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// The full Hamiltonian restricted to levels {1,2,3} x occupations
/// [center - W, center + W], optionally to one parity sector. Basis states are
/// ordered by occupation, then level, which makes the matrix banded (two
/// sub-diagonals inside a sector, four without the sector restriction).
///
/// Energies are stored relative to center * hbar*omega0: the diagonal entry of
/// (i, n) is e_i + (n - center). Add energy_offset() to recover absolute
/// energies. Keeping the stored numbers O(W) preserves full precision at
/// center ~ 1e8.
class FockWindowHamiltonian {
 public:
  FockWindowHamiltonian(const ModelParams& params, std::int64_t center, std::int64_t half_width,
                        Parity parity);

  const ModelParams& params() const noexcept { return params_; }
  std::int64_t center() const noexcept { return center_; }
  std::int64_t half_width() const noexcept { return half_width_; }
  Parity parity() const noexcept { return parity_; }
  double energy_offset() const noexcept { return static_cast<double>(center_); }

  std::size_t dimension() const noexcept { return labels_.size(); }
  std::size_t bandwidth() const noexcept { return bandwidth_; }
  const std::vector<BasisLabel>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(BasisLabel label) const;

  /// Stored (offset-relative) element; zero outside the band.
  double element(std::size_t row, std::size_t col) const;
  Eigen::MatrixXd dense() const;
  /// Max absolute row sum (infinity norm) of the stored matrix.
  double norm() const;

  /// LAPACK lower band storage, (bandwidth+1) x dimension, column-major.
  const std::vector<double>& band() const noexcept { return band_; }

  /// Test hook: perturbs one stored element, breaking exact symmetry in dense().
  void inject_asymmetry(std::size_t row, std::size_t col, double delta);

 private:
  ModelParams params_;
  std::int64_t center_;
  std::int64_t half_width_;
  Parity parity_;
  std::vector<BasisLabel> labels_;
  std::size_t bandwidth_ = 0;
  std::vector<double> band_;
  std::vector<std::array<double, 3>> asymmetry_;  // (row, col, delta) for inject_asymmetry
};

FockWindowHamiltonian build_hamiltonian(const ModelParams& params, std::int64_t center,
                                        std::int64_t half_width, Parity parity);

struct EigenPair {
  double value = 0.0;  // relative to energy_offset()
  Eigen::VectorXd vector;
};

/// The `count` eigenpairs whose eigenvalues (offset-relative) lie nearest to
/// `target`, sorted ascending. Banded bisection + inverse iteration; falls back
/// to a dense solve below dimension 6000 if the banded path fails.
std::vector<EigenPair> eigen_near(const FockWindowHamiltonian& h, double target, std::size_t count);

/// All eigenpairs with offset-relative eigenvalue in (lower, upper].
std::vector<EigenPair> eigen_in_range(const FockWindowHamiltonian& h, double lower, double upper);

/// Rotated-frame state Phi_{level,n} = e_level u(y) expressed in the sector
/// basis of h, where u is the eigenfunction of (1/2)(-d2/dy2 + y2) + E_level(y)
/// with mean occupation nearest n. Components <i, m| U_{i,level}(y) |u> are
/// computed on a local discrete-variable representation around n.
Eigen::VectorXd dressed_state_vector(const FockWindowHamiltonian& h, int level, std::int64_t n);

/// Exact eigenvalue identified with Phi_{level,n} by maximal overlap.
struct ExactLevel {
  int level = 1;
  std::int64_t n = 0;
  /// Dressed energy: eigenvalue minus n*hbar*omega0.
  double energy = 0.0;
  /// Squared overlap with the rotated-frame product state.
  double overlap = 0.0;
};

inline constexpr double kMinLabelOverlap = 0.5;

/// Identifies the exact eigenstate of Phi_{level,n} (n defaults to center).
/// Throws ConvergenceError when no eigenvector overlaps it by at least
/// kMinLabelOverlap (strong mixing, e.g. at a resonance).
ExactLevel exact_level(const ModelParams& params, std::int64_t center, std::int64_t half_width,
                       int level, std::optional<std::int64_t> n = std::nullopt);

std::array<ExactLevel, 3> exact_dressed_levels(const ModelParams& params, std::int64_t center,
                                               std::int64_t half_width);

/// Largest change of the `count` eigenvalues nearest the window center (each
/// parity sector) when the half-width is doubled.
double window_convergence(const ModelParams& params, std::int64_t center, std::int64_t half_width,
                          std::size_t count = 9);

/// Straight segment in the (g1, g2) plane, parameterised by t in [0, 1].
struct CouplingSegment {
  double g1_begin = 0.0;
  double g2_begin = 0.0;
  double g1_end = 0.0;
  double g2_end = 0.0;

  std::array<double, 2> at(double t) const {
    return {g1_begin + t * (g1_end - g1_begin), g2_begin + t * (g2_end - g2_begin)};
  }
};

struct TrackedPoint {
  double t = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  std::vector<double> energies;  // per label, absolute minus label n (dressed)
};

struct TrackedLevels {
  std::vector<BasisLabel> labels;
  std::vector<TrackedPoint> points;
  /// overlaps[i](a, b): |<label a at point i | label b at point i+1>|.
  std::vector<Eigen::MatrixXd> overlaps;
  std::vector<std::string> events;
};

/// Follows the exact eigenstates initially identified with `labels` (all in
/// one parity sector) along the segment. Each step assigns labels to
/// eigenvectors by maximising total squared overlap with the previous step;
/// steps are halved while any assigned overlap is below 0.5 or ambiguous.
TrackedLevels track_levels(const ModelParams& templ, const CouplingSegment& segment, int steps,
                           std::int64_t center, std::int64_t half_width,
                           const std::vector<BasisLabel>& labels);

struct GapOptions {
  int scan_points = 101;
  /// Relative half-width of the scan around the dressed-contour crossing.
  double scan_fraction = 0.05;
  /// Minimum squared overlap with Phi_{k, n - quanta} for a gap partner.
  double partner_weight = 0.02;
  /// Golden-section stops when the bracket is narrower than this in g1.
  double g_tolerance = 1e-12;
  /// Allowed relative change of a gap when the window is doubled.
  double window_tolerance = 0.01;
  /// Largest g1 searched for the dressed-contour crossing.
  double g1_max = 1.25;
};

struct GapMinimum {
  double g1 = 0.0;
  double g2 = 0.0;
  double gap = 0.0;
  /// gap divided by the larger neighbouring scan gap; small means a sharp
  /// anticrossing.
  double depth = 1.0;
  /// 1 - (largest squared overlap of Phi_{j,n} with one eigenstate) at the
  /// minimum: about 1/2 at a genuine anticrossing, near 0 for a spurious dip.
  double mixing = 0.0;
};

struct AnticrossingResult {
  int j = 1;
  int k = 2;
  int quanta = 11;
  double ratio = 0.0;
  double g1_contour = 0.0;  // dressed-model prediction
  BasisLabel upper;         // Phi_{j, n}
  BasisLabel lower;         // Phi_{k, n - quanta}
  std::vector<GapMinimum> minima;  // sorted by gap, smallest first
  std::vector<std::array<double, 2>> scan;  // (g1, gap)
  double window_change = 0.0;  // relative change of the smallest gap with 2W

  const GapMinimum& best() const { return minima.front(); }
};

/// Exact anticrossing between Phi_{j,n} and Phi_{k,n-quanta} along the ray
/// g2 = ratio * g1: locate the dressed-contour crossing, scan around it,
/// refine every local minimum by golden section and re-check the smallest gap
/// with a doubled window. Throws ConvergenceError when no minimum is found or
/// the window check fails.
AnticrossingResult anticrossing_gap(const ModelParams& templ, double ratio, int quanta, int j,
                                    int k, std::int64_t center, std::int64_t half_width,
                                    const GapOptions& options = {});

/// Evaluates the scan gap function (distance from the Phi_{j,n}-like
/// eigenstate to the nearest partner with Phi_{k,n-quanta} weight) at one point.
double anticrossing_gap_at(const ModelParams& params, int quanta, int j, int k,
                           std::int64_t center, std::int64_t half_width,
                           double partner_weight = 0.02);

struct SharpnessPoint {
  double g1 = 0.0;
  double g2 = 0.0;
  bool valid = false;
  double transition = 0.0;  // exact dressed E_k - E_j
  int nearest_odd = 0;
  double detuning = 0.0;  // transition - nearest_odd
  double inverse = 0.0;   // min(1/|detuning|, kSharpnessCap)
  std::string error;
};

inline constexpr double kSharpnessCap = 1e6;

/// |E_k - E_j - dn|^-1 at the nearest odd dn from exact eigenvalues on a grid
/// (row-major over g2, then g1). Failed points are marked invalid.
std::vector<SharpnessPoint> resonance_sharpness_map(const ModelParams& templ,
                                                    const std::vector<double>& g1_values,
                                                    const std::vector<double>& g2_values, int j,
                                                    int k, std::int64_t center,
                                                    std::int64_t half_width, unsigned threads = 1);

int nearest_odd(double x);

}  // namespace ladder
