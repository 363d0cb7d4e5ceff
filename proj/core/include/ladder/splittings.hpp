#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ladder/coupling.hpp"
#include "ladder/fock_window.hpp"
#include "ladder/model.hpp"

namespace ladder {

/// One anticrossing between Phi_{j,n} and Phi_{k,n-quanta} on a line g2 = ratio * g1.
struct SplittingRecord {
  int j = 1;
  int k = 2;
  int quanta = 11;
  double ratio = 0.0;
  /// Dressed-contour crossing, where the perturbative estimate is evaluated.
  double g1_contour = 0.0;
  /// Location of the smallest exact gap.
  double g1 = 0.0;
  double g2 = 0.0;
  double pt = 0.0;
  double exact = 0.0;
  double pt_over_exact = 0.0;
  /// Exact gap minima at which Phi_{j,n} is mixed by at least kSignificantMixing.
  int exact_minima = 0;
  /// Ratio outside [0.5, 2] or more than one significant exact minimum.
  bool anomalous = false;
  bool valid = false;
  std::string error;
  std::vector<GapMinimum> minima;
};

/// A gap minimum counts as an anticrossing when Phi_{j,n} is spread over
/// eigenstates at least this much there.
inline constexpr double kSignificantMixing = 0.25;
inline constexpr double kResonanceResidual = 1e-4;

/// Oscillator part of the rotated-frame states entering the estimate:
/// eigenfunctions of the single-level problem with potential E_j(y)
/// (adiabatic) or plain oscillator functions phi_n (harmonic).
enum class PtStates { adiabatic, harmonic };

std::string_view to_string(PtStates states);
PtStates parse_pt_states(std::string_view name);

/// 2 |<Phi_{j,n0}| V |Phi_{k,n0-quanta}>| at the params' couplings, n0 = params.n0().
/// `method` selects the quadrature for harmonic states. Zero when the
/// transition's own coupling vanishes. Throws InvalidArgument for even quanta
/// or when the dressed resonance residual exceeds kResonanceResidual.
double pt_splitting(const ModelParams& params, int j, int k, int quanta,
                    PtStates states = PtStates::adiabatic,
                    MatrixElementMethod method = MatrixElementMethod::fock_window);

struct SplittingOptions {
  std::int64_t half_width = 400;
  GapOptions gap;
  PtStates states = PtStates::adiabatic;
  MatrixElementMethod method = MatrixElementMethod::fock_window;
  unsigned threads = 1;
};

/// PT and exact splittings for every entry of `quanta_list` along g2 = ratio * g1
/// at the template's levels and n0. Failures become invalid records; the
/// result is sorted by quanta.
std::vector<SplittingRecord> compare_splittings(const ModelParams& templ, double ratio,
                                                const std::vector<int>& quanta_list, int j, int k,
                                                const SplittingOptions& options = {});

}  // namespace ladder
