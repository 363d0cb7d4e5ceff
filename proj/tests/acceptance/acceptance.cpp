// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are fixed here. Run with a criterion number to evaluate only that one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ladder/coupling.hpp"
#include "ladder/dressed.hpp"
#include "ladder/fock_window.hpp"
#include "ladder/splittings.hpp"
#include "ladder/trilevel.hpp"
#include "ladder/validation.hpp"
#include "oracles.hpp"

using namespace ladder;

namespace {

constexpr std::int64_t kLargeN = 100000000;

ModelParams reference_model(double g1, double g2, std::int64_t n0 = kLargeN) {
  return ModelParams::from_couplings(0.0, 11.0, 24.0, g1, g2, n0);
}

struct Verdict {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* format, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

// 1 ------------------------------------------------------------------------
Verdict cubic_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> level(-30.0, 30.0);
  std::uniform_real_distribution<double> gap(0.05, 25.0);
  std::uniform_real_distribution<double> coupling(0.0, 3.0);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double e1 = level(rng);
    const double e2 = e1 + gap(rng);
    const double e3 = e2 + gap(rng);
    const ModelParams p(e1, e2, e3, coupling(rng), coupling(rng), 1);
    const double y = coord(rng);
    const auto e = eigenvalues_at(p, y);
    const auto ref = oracle::jacobi_eigenvalues(level_matrix(p, y));
    for (int j = 0; j < 3; ++j) {
      worst = std::max(worst, std::abs(e[j] - ref[j]) / std::max(1.0, std::abs(ref[j])));
    }
  }
  return {worst <= 1e-10, fmt("10000 instances, max scaled error %.2e (limit 1e-10)", worst)};
}

// 2 ------------------------------------------------------------------------
Verdict small_basis() {
  const ModelParams p = reference_model(0.5, 0.5, 50);
  const FockWindowHamiltonian h(p, 50, 50, Parity::both);
  double worst = 0.0;
  std::size_t count = 0;
  Eigen::VectorXd windowed(0);
  {
    // Banded solver over the whole spectrum.
    const auto pairs = eigen_in_range(h, -1e6, 1e6);
    windowed.resize(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      windowed(static_cast<Eigen::Index>(i)) = pairs[i].value + h.energy_offset();
    }
  }
  const Eigen::VectorXd ref =
      oracle::dense_eigenvalues(oracle::full_basis_hamiltonian({0, 11, 24}, p.u(), p.v(), 100));
  if (windowed.size() != ref.size()) return {false, "spectrum sizes differ"};
  for (Eigen::Index i = 0; i < ref.size(); ++i) {
    worst = std::max(worst, std::abs(windowed(i) - ref(i)));
    ++count;
  }
  return {worst <= 1e-10,
          "n0=50 W=50, " + std::to_string(count) + " eigenvalues, max error " + fmt("%.2e", worst) +
              " (limit 1e-10)"};
}

// 3 ------------------------------------------------------------------------
double resonance_distance(const ModelParams& p) {
  double d = INFINITY;
  for (auto [j, k] : {std::pair{1, 2}, std::pair{2, 3}}) {
    const double t = dressed_transition(p, j, k, kLargeN);
    d = std::min(d, std::abs(t - nearest_odd(t)));
    d = std::min(d, std::abs(t - (nearest_odd(t) - 2)));
    d = std::min(d, std::abs(t - (nearest_odd(t) + 2)));
  }
  return d;
}

Verdict dressed_accuracy() {
  constexpr std::int64_t kWindow = 400;
  double worst = 0.0;
  double worst_window = 0.0;
  double min_distance = INFINITY;
  int points = 0;
  for (int b = 0; b < 5; ++b) {
    for (int a = 0; a < 5; ++a) {
      double g1 = 0.2 + 0.1 * a;
      const double g2 = 0.1 + 0.075 * b;
      // Nudge along g1 until both transitions sit >= 0.3 from odd orders.
      int step = 0;
      while (resonance_distance(reference_model(g1, g2)) < 0.3) {
        ++step;
        g1 = 0.2 + 0.1 * a + 0.004 * ((step + 1) / 2) * (step % 2 == 1 ? 1 : -1);
        if (step > 40) return {false, "no off-resonant point near g1 = " + fmt("%.2f", 0.2 + 0.1 * a)};
      }
      const ModelParams p = reference_model(g1, g2);
      min_distance = std::min(min_distance, resonance_distance(p));
      worst_window = std::max(worst_window, window_convergence(p, kLargeN, kWindow));
      const auto exact = exact_dressed_levels(p, kLargeN, kWindow);
      const auto wkb = wkb_dressed_energies(p, kLargeN);
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(exact[j].energy - wkb[j]));
      ++points;
    }
  }
  const bool ok = worst <= 0.1 && worst_window <= 1e-8 && min_distance >= 0.3;
  return {ok, std::to_string(points) + " points in g1 [0.2,0.6] x g2 [0.1,0.4], max |WKB - exact| " +
                  fmt("%.4f", worst) + " (limit 0.1), window change " + fmt("%.1e", worst_window) +
                  ", min resonance distance " + fmt("%.3f", min_distance)};
}

// 4 ------------------------------------------------------------------------
Verdict zero_coupling_orders() {
  std::string detail;
  bool ok = true;
  for (auto [j, k, dn] : {std::tuple{1, 2, 11}, std::tuple{2, 3, 13}}) {
    const ResonanceContour c = resonance_contour(reference_model(0.5, 0.5), j, k, dn);
    double closest = INFINITY;
    for (const ContourPoint& p : c.points) closest = std::min(closest, std::hypot(p.g1, p.g2));
    ok = ok && closest <= 1e-3;
    detail += std::to_string(j) + "-" + std::to_string(k) + " dn=" + std::to_string(dn) +
              " closest point at g=" + fmt("%.1e", closest) + "; ";
  }
  return {ok, detail + "limit 1e-3"};
}

// 5 ------------------------------------------------------------------------
Verdict periodicity() {
  const ModelParams p = reference_model(0.5, 0.5);
  double worst = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const ExactLevel a = exact_level(p, kLargeN, 400, j, kLargeN);
    const ExactLevel b = exact_level(p, kLargeN, 400, j, kLargeN + 2);
    // dressed energies exclude n, so E_{j,n+2} - E_{j,n} - 2 = b - a
    worst = std::max(worst, std::abs(b.energy - a.energy));
  }
  return {worst <= 1e-6, "max |E(j,n+2) - E(j,n) - 2| = " + fmt("%.2e", worst) + " (limit 1e-6)"};
}

// 6 ------------------------------------------------------------------------
Verdict wkb_vs_fd() {
  std::vector<double> diffs;
  std::string detail;
  // Richardson spread at n = 1000 is ~2e-6 on a level near 1000; 1e-5 is still
  // three orders below the comparison limit.
  FdGrid grid;
  grid.tolerance = 1e-5;
  for (std::int64_t n : {100, 400, 1000}) {
    const ModelParams p = reference_model(0.5, 0.5).rescaled_to(n);
    double worst = 0.0;
    for (int j = 1; j <= 3; ++j) {
      worst = std::max(worst, std::abs(wkb_dressed_energy(p, j, n).energy - h0_level_fd(p, j, n, grid).energy));
    }
    diffs.push_back(worst);
    detail += "n=" + std::to_string(n) + ": " + fmt("%.2e", worst) + "; ";
  }
  const bool ok = diffs[0] > diffs[1] && diffs[1] > diffs[2] && diffs[2] <= 1e-2;
  return {ok, detail + "decreasing, limit 1e-2 at n=1000"};
}

// 7 ------------------------------------------------------------------------
Verdict benign_line() {
  SplittingOptions options;
  const std::vector<int> quanta{13, 15, 17, 19, 21, 23, 25, 27};
  const auto records = compare_splittings(reference_model(0.5, 0.15), 0.3, quanta, 1, 2, options);
  int in_band = 0;
  int in_tight = 0;
  bool monotone = true;
  std::string detail;
  double previous = INFINITY;
  for (const SplittingRecord& r : records) {
    if (!r.valid) {
      detail += "dn=" + std::to_string(r.quanta) + " invalid (" + r.error + "); ";
      continue;
    }
    in_band += r.pt_over_exact >= 0.5 && r.pt_over_exact <= 2.0;
    in_tight += r.pt_over_exact >= 0.8 && r.pt_over_exact <= 1.25;
    monotone = monotone && r.exact < previous;
    previous = r.exact;
    char buf[160];
    std::snprintf(buf, sizeof buf, "dn=%d exact=%.3e ratio=%.3f minima=%d; ", r.quanta, r.exact,
                  r.pt_over_exact, r.exact_minima);
    detail += buf;
  }
  const int total = static_cast<int>(quanta.size());
  const bool ok = in_band == total && 4 * in_tight >= 3 * total && monotone;
  detail += std::to_string(in_band) + "/" + std::to_string(total) + " in [0.5,2], " +
            std::to_string(in_tight) + "/" + std::to_string(total) + " in [0.8,1.25], exact gap " +
            (monotone ? "decreasing" : "not decreasing") + " with dn";
  return {ok, detail};
}

// 8 ------------------------------------------------------------------------
Verdict interference() {
  SplittingOptions options;
  const auto records = compare_splittings(reference_model(0.5, 0.05), 0.1, {23, 25}, 1, 2, options);
  std::string detail;
  for (const SplittingRecord& r : records) {
    char buf[200];
    if (r.valid) {
      std::snprintf(buf, sizeof buf, "dn=%d: %d significant minima, ratio %.3f; ", r.quanta,
                    r.exact_minima, r.pt_over_exact);
    } else {
      std::snprintf(buf, sizeof buf, "dn=%d invalid (%s); ", r.quanta, r.error.c_str());
    }
    detail += buf;
  }
  const SplittingRecord& r = records.front();
  const bool ok = r.valid && r.exact_minima >= 2 && (r.pt_over_exact < 0.5 || r.pt_over_exact > 2.0);
  return {ok, detail + "required at dn=23: two minima and ratio outside [0.5,2]"};
}

// 9 ------------------------------------------------------------------------
Verdict method_cross_check() {
  const ModelParams p = reference_model(0.5, 0.15, 500);
  double worst = 0.0;
  for (int dn = 11; dn <= 21; dn += 2) {
    OscillatorMatrixElementRequest req{1, 2, 500, 500 - dn, MatrixElementMethod::hermite_quadrature};
    const double h = v_matrix_element(p, req);
    req.method = MatrixElementMethod::fock_window;
    const double f = v_matrix_element(p, req);
    worst = std::max(worst, std::abs(h - f) / std::abs(f));
  }
  return {worst <= 1e-6, "n=500, dn 11..21, max relative difference " + fmt("%.2e", worst) +
                             " (limit 1e-6)"};
}

// 10 -----------------------------------------------------------------------
Verdict invariant_suite() {
  const ValidationReport report = run_validation();
  std::string detail;
  int passed = 0;
  for (const CheckResult& c : report.checks) {
    passed += c.passed;
    if (!c.passed) detail += c.name + " failed: " + c.detail + "; ";
  }
  detail += std::to_string(passed) + "/" + std::to_string(report.checks.size()) + " checks passed";
  return {report.passed(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "cubic-oracle", 5.0, cubic_oracle},
      {2, "small-basis", 10.0, small_basis},
      {3, "dressed-accuracy", 300.0, dressed_accuracy},
      {4, "zero-coupling-orders", 120.0, zero_coupling_orders},
      {5, "periodicity", 60.0, periodicity},
      {6, "wkb-vs-fd", 120.0, wkb_vs_fd},
      {7, "benign-line", 600.0, benign_line},
      {8, "interference", 300.0, interference},
      {9, "method-cross-check", 60.0, method_cross_check},
      {10, "invariant-suite", 180.0, invariant_suite},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      v.passed = false;
      v.detail += "; over runtime budget";
    }
    std::printf("[%s] criterion %d %s (%.1f s, budget %.0f s): %s\n", v.passed ? "PASS" : "FAIL", c.id,
                c.name, seconds, c.budget_seconds, v.detail.c_str());
    std::fflush(stdout);
    failures += !v.passed;
  }
  return failures == 0 ? 0 : 1;
}
