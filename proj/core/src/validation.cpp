#include "ladder/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>

#include "ladder/coupling.hpp"
#include "ladder/dressed.hpp"
#include "ladder/fock_window.hpp"
#include "ladder/trilevel.hpp"

namespace ladder {
namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string describe(const char* what, double value, double limit) {
  std::ostringstream os;
  os << what << " = " << value << " (limit " << limit << ")";
  return os.str();
}

Outcome within(const char* what, double value, double limit) {
  return {value <= limit, describe(what, value, limit)};
}

// Small model used throughout: the reference levels at n0 = 400.
ModelParams desk_model(double g1 = 0.4, double g2 = 0.3) {
  return ModelParams::from_couplings(0.0, 11.0, 24.0, g1, g2, 400);
}

const std::vector<double>& sample_ys() {
  static const std::vector<double> ys{0.0, 0.37, 1.9, 4.2, 9.5, 17.0, 27.5};
  return ys;
}

Outcome basis_orthogonality() {
  const ModelParams p = desk_model();
  double worst = 0.0;
  for (double y : sample_ys()) {
    const Eigen::Matrix3d u = continuous_eigenbasis(p, y).basis;
    worst = std::max(worst, (u.transpose() * u - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    const Eigen::Matrix3d d = u.transpose() * level_matrix(p, y) * u;
    const std::array<double, 3> e = eigenvalues_at(p, y);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double expect = i == j ? e[static_cast<std::size_t>(i)] : 0.0;
        worst = std::max(worst, std::abs(d(i, j) - expect) / std::max(1.0, std::abs(expect)));
      }
    }
  }
  return within("max deviation", worst, 1e-10);
}

Outcome antisymmetry() {
  const ModelParams p = desk_model();
  double worst = 0.0;
  for (double y : sample_ys()) {
    const Eigen::Matrix3d a = basis_derivative_products(p, y, default_coupling_step(y));
    const double scale = std::max(1e-12, a.cwiseAbs().maxCoeff());
    worst = std::max(worst, (a + a.transpose()).cwiseAbs().maxCoeff() / scale);
  }
  return within("relative |A + A^T|", worst, 1e-6);
}

Outcome parity_selection() {
  const ModelParams p = desk_model(0.6, 0.5);
  const std::int64_t n = 40;
  double allowed = 0.0;
  double forbidden = 0.0;
  for (int dn = 1; dn <= 6; ++dn) {
    for (auto [j, k] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
      OscillatorMatrixElementRequest req{j, k, n, n - dn, MatrixElementMethod::hermite_quadrature};
      const double v = std::abs(v_matrix_element(p, req));
      // 1-2 and 2-3 couple odd differences, 1-3 even ones.
      const bool odd_pair = (j + k) % 2 == 1;
      const bool nonzero = odd_pair == (dn % 2 == 1);
      (nonzero ? allowed : forbidden) = std::max(nonzero ? allowed : forbidden, v);
    }
  }
  Outcome o = within("max forbidden element", forbidden, 1e-12 * std::max(1.0, allowed));
  if (!(allowed > 1e-8)) {
    o.passed = false;
    o.detail += "; allowed elements vanish";
  }
  return o;
}

Outcome trace_preservation() {
  double worst = 0.0;
  for (double g : {0.0, 0.3, 0.9, 1.4}) {
    const ModelParams p = desk_model(g, 0.7 * g);
    for (double y : sample_ys()) {
      const std::array<double, 3> e = eigenvalues_at(p, y);
      worst = std::max(worst, std::abs(e[0] + e[1] + e[2] - level_matrix(p, y).trace()));
    }
  }
  return within("trace defect", worst, 1e-10);
}

Outcome even_y_symmetry() {
  const ModelParams p = desk_model();
  double worst = 0.0;
  for (double y : sample_ys()) {
    if (y == 0.0) continue;
    const std::array<double, 3> a = eigenvalues_at(p, y);
    const std::array<double, 3> b = eigenvalues_at(p, -y);
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    const CouplingSample fp = coupling_functions(p, y);
    const CouplingSample fm = coupling_functions(p, -y);
    const double scale = std::max({1e-12, std::abs(fp.f12), std::abs(fp.f13), std::abs(fp.f23)});
    // F12 and F23 are even in y, F13 odd.
    worst = std::max({worst, std::abs(fp.f12 - fm.f12) / scale, std::abs(fp.f23 - fm.f23) / scale,
                      std::abs(fp.f13 + fm.f13) / scale});
  }
  return within("max asymmetry", worst, 1e-7);
}

Outcome hamiltonian_symmetry(bool inject_fault) {
  FockWindowHamiltonian h = build_hamiltonian(desk_model(), 400, 40, Parity::even);
  if (inject_fault) h.inject_asymmetry(5, 3, 1e-3);
  const Eigen::MatrixXd m = h.dense();
  return within("max |H - H^T|", (m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

Outcome parity_decoupling() {
  const FockWindowHamiltonian h = build_hamiltonian(desk_model(), 400, 30, Parity::both);
  const Eigen::MatrixXd m = h.dense();
  const std::vector<BasisLabel>& labels = h.labels();
  double leak = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    for (std::size_t c = 0; c < labels.size(); ++c) {
      if (parity_of(labels[r].level, labels[r].n) != parity_of(labels[c].level, labels[c].n)) {
        leak = std::max(leak, std::abs(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
      }
    }
  }
  Outcome o = within("cross-sector element", leak, 0.0);
  if (h.bandwidth() > 4) {
    o.passed = false;
    o.detail += "; bandwidth exceeds 4";
  }
  return o;
}

Outcome level_shift() {
  const double shift = 3.25;
  const ModelParams p = desk_model();
  const ModelParams q = p.shifted(shift);
  double worst = 0.0;
  for (double y : sample_ys()) {
    const std::array<double, 3> a = eigenvalues_at(p, y);
    const std::array<double, 3> b = eigenvalues_at(q, y);
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(b[j] - a[j] - shift));
    const CouplingSample fa = coupling_functions(p, y);
    const CouplingSample fb = coupling_functions(q, y);
    worst = std::max({worst, std::abs(fa.f12 - fb.f12), std::abs(fa.f13 - fb.f13),
                      std::abs(fa.f23 - fb.f23)});
  }
  const std::array<double, 3> wa = wkb_dressed_energies(p, 400);
  const std::array<double, 3> wb = wkb_dressed_energies(q, 400);
  for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(wb[j] - wa[j] - shift));
  const ExactLevel ea = exact_level(p, 400, 40, 2);
  const ExactLevel eb = exact_level(q, 400, 40, 2);
  worst = std::max(worst, std::abs(eb.energy - ea.energy - shift));
  return within("max shift defect", worst, 1e-9);
}

Outcome determinism(unsigned threads) {
  const ModelParams p = desk_model();
  const std::vector<double> g1s{0.2, 0.45, 0.7};
  const std::vector<double> g2s{0.15, 0.5};
  const auto a = resonance_sharpness_map(p, g1s, g2s, 1, 2, 400, 40, 1);
  const auto b = resonance_sharpness_map(p, g1s, g2s, 1, 2, 400, 40, std::max(2u, threads));
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) {
    same = a[i].valid == b[i].valid &&
           std::memcmp(&a[i].transition, &b[i].transition, sizeof(double)) == 0;
  }
  const std::array<double, 3> w1 = wkb_dressed_energies(p, 400);
  const std::array<double, 3> w2 = wkb_dressed_energies(p, 400);
  same = same && std::memcmp(w1.data(), w2.data(), sizeof(w1)) == 0;
  return {same, same ? "bitwise identical across repeats and thread counts" : "results differ"};
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validation(const ValidationOptions& options) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> suite{
      {"basis_orthogonality", basis_orthogonality},
      {"coupling_antisymmetry", antisymmetry},
      {"v_parity_selection", parity_selection},
      {"trace_preservation", trace_preservation},
      {"even_y_symmetry", even_y_symmetry},
      {"hamiltonian_symmetry", [&] { return hamiltonian_symmetry(options.inject_symmetry_fault); }},
      {"parity_block_decoupling", parity_decoupling},
      {"level_shift_covariance", level_shift},
      {"determinism", [&] { return determinism(options.threads); }},
  };
  ValidationReport report;
  for (const auto& [name, check] : suite) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = check();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace ladder
