#include "ladder/splittings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ladder/dressed.hpp"
#include "ladder/errors.hpp"
#include "ladder/parallel.hpp"

namespace ladder {
namespace {

bool coupling_vanishes(const ModelParams& params, int j, int k) {
  const int lo = std::min(j, k);
  const int hi = std::max(j, k);
  if (lo == 1 && hi == 2) return params.u() == 0.0;
  if (lo == 2 && hi == 3) return params.v() == 0.0;
  return params.u() == 0.0 || params.v() == 0.0;
}

}  // namespace

std::string_view to_string(PtStates states) {
  return states == PtStates::adiabatic ? "adiabatic" : "harmonic";
}

PtStates parse_pt_states(std::string_view name) {
  if (name == "adiabatic") return PtStates::adiabatic;
  if (name == "harmonic") return PtStates::harmonic;
  throw InvalidArgument("unsupported splitting states '" + std::string(name) + "'");
}

double pt_splitting(const ModelParams& params, int j, int k, int quanta, PtStates states,
                    MatrixElementMethod method) {
  check_level(j);
  check_level(k);
  if (j == k) throw InvalidArgument("a splitting needs two distinct levels");
  if (quanta <= 0 || quanta % 2 == 0) {
    throw InvalidArgument("resonances exchange an odd, positive number of quanta (got " +
                          std::to_string(quanta) + ")");
  }
  if (coupling_vanishes(params, j, k)) return 0.0;
  const std::int64_t n = params.n0();
  if (n - quanta < 0) throw InvalidArgument("n0 smaller than the exchanged quanta");
  const double residual = dressed_transition(params, j, k, n) - quanta;
  if (std::abs(residual) > kResonanceResidual) {
    throw InvalidArgument("coupling point is off resonance (residual " + std::to_string(residual) +
                          ")");
  }
  if (states == PtStates::adiabatic) {
    return 2.0 * std::abs(adiabatic_v_element(params, j, k, n, n - quanta));
  }
  OscillatorMatrixElementRequest req;
  req.j = j;
  req.k = k;
  req.n = n;
  req.m = n - quanta;
  req.method = method;
  return 2.0 * std::abs(v_matrix_element(params, req));
}

std::vector<SplittingRecord> compare_splittings(const ModelParams& templ, double ratio,
                                                const std::vector<int>& quanta_list, int j, int k,
                                                const SplittingOptions& options) {
  std::vector<SplittingRecord> records(quanta_list.size());
  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    SplittingRecord& r = records[i];
    r.j = j;
    r.k = k;
    r.quanta = quanta_list[i];
    r.ratio = ratio;
    try {
      const AnticrossingResult gap = anticrossing_gap(templ, ratio, r.quanta, j, k, templ.n0(),
                                                      options.half_width, options.gap);
      r.g1_contour = gap.g1_contour;
      r.g1 = gap.best().g1;
      r.g2 = gap.best().g2;
      r.exact = gap.best().gap;
      r.minima = gap.minima;
      r.exact_minima = static_cast<int>(std::count_if(
          gap.minima.begin(), gap.minima.end(),
          [](const GapMinimum& m) { return m.mixing >= kSignificantMixing; }));
      r.pt = pt_splitting(templ.with_couplings(r.g1_contour, ratio * r.g1_contour), j, k,
                          r.quanta, options.states, options.method);
      r.pt_over_exact = r.exact > 0.0 ? r.pt / r.exact : 0.0;
      r.anomalous = r.exact_minima > 1 || r.pt_over_exact < 0.5 || r.pt_over_exact > 2.0;
      r.valid = true;
    } catch (const std::exception& e) {
      r.valid = false;
      r.error = e.what();
    }
  });
  std::stable_sort(records.begin(), records.end(),
                   [](const SplittingRecord& a, const SplittingRecord& b) { return a.quanta < b.quanta; });
  return records;
}

}  // namespace ladder
