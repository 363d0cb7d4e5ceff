#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ladder/dressed.hpp"
#include "ladder/errors.hpp"
#include "ladder/fock_window.hpp"
#include "oracles.hpp"

using ladder::BasisLabel;
using ladder::FockWindowHamiltonian;
using ladder::ModelParams;
using ladder::Parity;

namespace {

constexpr std::int64_t kLargeN = 100000000;

ModelParams large(double g1, double g2) {
  return ModelParams::from_couplings(0, 11, 24, g1, g2, kLargeN);
}

std::vector<double> absolute_spectrum(const FockWindowHamiltonian& h) {
  const Eigen::VectorXd ev = oracle::dense_eigenvalues(h.dense());
  std::vector<double> out(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) out[static_cast<std::size_t>(i)] = ev(i) + h.energy_offset();
  return out;
}

}  // namespace

TEST(FockWindow, ParityOfLabels) {
  EXPECT_EQ(ladder::parity_of(1, 3), Parity::even);
  EXPECT_EQ(ladder::parity_of(2, 3), Parity::odd);
  EXPECT_EQ(ladder::nearest_odd(10.2), 11);
  EXPECT_EQ(ladder::nearest_odd(12.9), 13);
  EXPECT_EQ(ladder::nearest_odd(-0.5), -1);
}

TEST(FockWindow, ElementRules) {
  const ModelParams p(0.0, 11.0, 24.0, 0.013, 0.021, 1000);
  const FockWindowHamiltonian h(p, 1000, 20, Parity::both);
  EXPECT_EQ(h.dimension(), 3u * 41u);
  EXPECT_LE(h.bandwidth(), 4u);
  const auto at = [&](int i, std::int64_t n, int k, std::int64_t m) {
    return h.element(*h.index_of({i, n}), *h.index_of({k, m}));
  };
  for (std::int64_t n : {985, 1000, 1013}) {
    EXPECT_DOUBLE_EQ(at(2, n, 2, n) + h.energy_offset(), 11.0 + static_cast<double>(n));
    EXPECT_DOUBLE_EQ(at(2, n - 1, 1, n), 0.013 * std::sqrt(static_cast<double>(n)));
    EXPECT_DOUBLE_EQ(at(1, n + 1, 2, n), 0.013 * std::sqrt(static_cast<double>(n + 1)));
    EXPECT_DOUBLE_EQ(at(3, n - 1, 2, n), 0.021 * std::sqrt(static_cast<double>(n)));
    EXPECT_DOUBLE_EQ(at(2, n + 1, 3, n), 0.021 * std::sqrt(static_cast<double>(n + 1)));
    EXPECT_EQ(at(1, n, 3, n + 1), 0.0);
    EXPECT_EQ(at(1, n, 2, n), 0.0);
    EXPECT_EQ(at(1, n, 2, n + 2), 0.0);
  }
  const Eigen::MatrixXd d = h.dense();
  EXPECT_EQ((d - d.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FockWindow, SectorsHoldOneParityAndDecouple) {
  const ModelParams p(0.0, 11.0, 24.0, 0.013, 0.021, 1000);
  for (Parity sector : {Parity::even, Parity::odd}) {
    const FockWindowHamiltonian h(p, 1000, 30, sector);
    EXPECT_LE(h.bandwidth(), 2u);
    for (const BasisLabel& l : h.labels()) EXPECT_EQ(ladder::parity_of(l.level, l.n), sector);
  }
  const FockWindowHamiltonian full(p, 1000, 30, Parity::both);
  const Eigen::MatrixXd d = full.dense();
  for (std::size_t r = 0; r < full.dimension(); ++r) {
    for (std::size_t c = 0; c < full.dimension(); ++c) {
      const BasisLabel a = full.labels()[r];
      const BasisLabel b = full.labels()[c];
      if (ladder::parity_of(a.level, a.n) != ladder::parity_of(b.level, b.n)) {
        ASSERT_EQ(d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), 0.0);
      }
    }
  }
}

TEST(FockWindow, RejectsBadWindows) {
  const ModelParams p(0.0, 11.0, 24.0, 0.01, 0.01, 100);
  EXPECT_THROW(FockWindowHamiltonian(p, 100, 7, Parity::even), ladder::InvalidArgument);
  EXPECT_THROW(FockWindowHamiltonian(p, 100, 101, Parity::even), ladder::InvalidArgument);
}

TEST(FockWindow, UncoupledSpectrumIsBare) {
  const ModelParams p(0.0, 11.0, 24.0, 0.0, 0.0, 500);
  const FockWindowHamiltonian h(p, 500, 10, Parity::both);
  const Eigen::MatrixXd d = h.dense();
  EXPECT_TRUE(d.isDiagonal());
  const auto near = ladder::eigen_near(h, 11.0, 1);
  ASSERT_EQ(near.size(), 1u);
  EXPECT_EQ(near[0].value + h.energy_offset(), 511.0);
  EXPECT_NEAR(near[0].vector.cwiseAbs().maxCoeff(), 1.0, 1e-14);
  const std::size_t idx = *h.index_of({2, 500});
  EXPECT_NEAR(std::abs(near[0].vector(static_cast<Eigen::Index>(idx))), 1.0, 1e-14);
}

TEST(FockWindow, FullBasisMatchesIndependentDenseBuild) {
  const ModelParams p = ModelParams::from_couplings(0, 11, 24, 0.6, 0.4, 50);
  const std::vector<double> windowed = absolute_spectrum(FockWindowHamiltonian(p, 50, 50, Parity::both));
  const Eigen::VectorXd reference =
      oracle::dense_eigenvalues(oracle::full_basis_hamiltonian({0, 11, 24}, p.u(), p.v(), 100));
  ASSERT_EQ(windowed.size(), static_cast<std::size_t>(reference.size()));
  for (std::size_t i = 0; i < windowed.size(); ++i) {
    EXPECT_NEAR(windowed[i], reference(static_cast<Eigen::Index>(i)), 1e-10);
  }
  std::vector<double> sectors;
  for (Parity s : {Parity::even, Parity::odd}) {
    const auto part = absolute_spectrum(FockWindowHamiltonian(p, 50, 50, s));
    sectors.insert(sectors.end(), part.begin(), part.end());
  }
  std::sort(sectors.begin(), sectors.end());
  for (std::size_t i = 0; i < windowed.size(); ++i) EXPECT_NEAR(sectors[i], windowed[i], 1e-10);
}

TEST(FockWindow, BandedPairsMatchDenseOnRandomInstances) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> g(0.05, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams p = ModelParams::from_couplings(0, 11, 24, g(rng), g(rng), 200);
    const FockWindowHamiltonian h(p, 200, 90, trial % 2 == 0 ? Parity::even : Parity::odd);
    ASSERT_LE(h.dimension(), 300u);
    const Eigen::VectorXd all = oracle::dense_eigenvalues(h.dense());
    const auto pairs = ladder::eigen_near(h, 3.0, 12);
    ASSERT_EQ(pairs.size(), 12u);
    const double norm = h.norm();
    for (std::size_t a = 0; a < pairs.size(); ++a) {
      const Eigen::VectorXd r = h.dense() * pairs[a].vector - pairs[a].value * pairs[a].vector;
      EXPECT_LE(r.norm(), 1e-9 * norm);
      double nearest = INFINITY;
      for (Eigen::Index i = 0; i < all.size(); ++i) nearest = std::min(nearest, std::abs(all(i) - pairs[a].value));
      EXPECT_LE(nearest, 1e-10 * std::max(1.0, norm));
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        EXPECT_NEAR(pairs[a].vector.dot(pairs[b].vector), a == b ? 1.0 : 0.0, 1e-10);
      }
    }
    // The returned values are the 12 nearest to the target.
    std::vector<double> distances;
    for (Eigen::Index i = 0; i < all.size(); ++i) distances.push_back(std::abs(all(i) - 3.0));
    std::sort(distances.begin(), distances.end());
    for (const auto& pair : pairs) EXPECT_LE(std::abs(pair.value - 3.0), distances[11] + 1e-10);
  }
}

TEST(FockWindow, WindowConvergenceAtLargeOccupation) {
  EXPECT_LE(ladder::window_convergence(large(0.5, 0.5), kLargeN, 400), 1e-8);
}

TEST(FockWindow, DressedLevelsRepeatWithPeriodTwo) {
  const ModelParams p = large(0.5, 0.5);
  for (int j = 1; j <= 3; ++j) {
    const ladder::ExactLevel a = ladder::exact_level(p, kLargeN, 400, j, kLargeN);
    const ladder::ExactLevel b = ladder::exact_level(p, kLargeN, 400, j, kLargeN + 2);
    EXPECT_GT(a.overlap, 0.9);
    EXPECT_NEAR((b.energy + 2.0) - a.energy, 2.0, 1e-6);
  }
}

TEST(FockWindow, ExactLevelsCloseToWkb) {
  const ModelParams p = large(0.3, 0.2);
  const auto exact = ladder::exact_dressed_levels(p, kLargeN, 400);
  const auto wkb = ladder::wkb_dressed_energies(p, kLargeN);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(exact[j].energy, wkb[j], 0.1);
}

TEST(FockWindow, UniformLevelShiftShiftsSpectrum) {
  const ModelParams p = ModelParams::from_couplings(0, 11, 24, 0.6, 0.4, 300);
  const double c = 7.3;
  const FockWindowHamiltonian a(p, 300, 100, Parity::odd);
  const FockWindowHamiltonian b(p.shifted(c), 300, 100, Parity::odd);
  const auto ea = absolute_spectrum(a);
  const auto eb = absolute_spectrum(b);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    EXPECT_NEAR(eb[i] - ea[i], c, 1e-10 * std::abs(eb[i]));
  }
}

TEST(FockWindow, DressedStateVectorIsNormalisedAndInSector) {
  const ModelParams p = large(0.5, 0.3);
  const FockWindowHamiltonian h(p, kLargeN, 200, ladder::parity_of(2, kLargeN));
  const Eigen::VectorXd psi = ladder::dressed_state_vector(h, 2, kLargeN);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-8);
  EXPECT_THROW(ladder::dressed_state_vector(h, 2, kLargeN + 190), ladder::InvalidArgument);
}

TEST(Tracking, ZeroLengthSweepKeepsLabels) {
  const ModelParams p = large(0.4, 0.2);
  const ladder::CouplingSegment still{0.4, 0.2, 0.4, 0.2};
  const std::vector<BasisLabel> labels{{1, kLargeN}, {2, kLargeN - 13}};
  const ladder::TrackedLevels t = ladder::track_levels(p, still, 3, kLargeN, 200, labels);
  EXPECT_EQ(t.labels, labels);
  ASSERT_EQ(t.points.size(), 4u);
  for (const auto& point : t.points) {
    for (std::size_t a = 0; a < labels.size(); ++a) {
      EXPECT_DOUBLE_EQ(point.energies[a], t.points.front().energies[a]);
    }
  }
  for (const auto& o : t.overlaps) {
    EXPECT_NEAR(o(0, 0), 1.0, 1e-10);
    EXPECT_NEAR(o(1, 1), 1.0, 1e-10);
  }
  EXPECT_THROW(ladder::track_levels(p, still, 1, kLargeN, 200, {{1, kLargeN}, {2, kLargeN}}),
               ladder::InvalidArgument);
}

TEST(Tracking, AvoidedCrossingSitsOnTheDressedContour) {
  const ModelParams p = large(0.5, 0.15);
  const double g1c = ladder::resonance_on_line(p, 1, 2, 13, 0.3, 1.25).front();
  const ladder::CouplingSegment seg{0.95 * g1c, 0.285 * g1c, 1.05 * g1c, 0.315 * g1c};
  const std::vector<BasisLabel> labels{{1, kLargeN}, {2, kLargeN - 13}};
  const ladder::TrackedLevels t = ladder::track_levels(p, seg, 20, kLargeN, 200, labels);
  double best_gap = INFINITY;
  double best_g1 = 0.0;
  for (const auto& point : t.points) {
    const double gap = std::abs(point.energies[0] - (point.energies[1] - 13.0));
    if (gap < best_gap) {
      best_gap = gap;
      best_g1 = point.g1;
    }
  }
  EXPECT_NEAR(best_g1, g1c, 0.02 * g1c);
  EXPECT_LT(best_gap, 0.05);
}

TEST(Anticrossing, MinimumNearContourWithGenuineMixing) {
  const ModelParams p = large(0.5, 0.15);
  const ladder::AnticrossingResult r = ladder::anticrossing_gap(p, 0.3, 13, 1, 2, kLargeN, 400);
  EXPECT_NEAR(r.best().g1, r.g1_contour, 0.02 * r.g1_contour);
  EXPECT_NEAR(r.best().g2, 0.3 * r.best().g1, 1e-15);
  EXPECT_GT(r.best().mixing, 0.25);
  EXPECT_GT(r.best().gap, 0.0);
  EXPECT_LE(r.window_change, 0.01);
  EXPECT_THROW(ladder::anticrossing_gap(p, 0.3, 12, 1, 2, kLargeN, 400), ladder::InvalidArgument);
}

TEST(Anticrossing, DecoupledLevelOneCrossesExactly) {
  // With u = 0 the states of level 1 are exact eigenstates, so nothing repels them.
  const ModelParams p(0.0, 11.0, 24.0, 0.0, 0.0045, kLargeN);
  const FockWindowHamiltonian h(p, kLargeN, 100, ladder::parity_of(1, kLargeN));
  const auto near = ladder::eigen_near(h, 0.0, 1);
  EXPECT_NEAR(near[0].value, 0.0, 1e-12);
}

TEST(SharpnessMap, UncoupledPointHitsTheCap) {
  const ModelParams p = large(0.5, 0.5);
  const auto map = ladder::resonance_sharpness_map(p, {0.0}, {0.0}, 1, 2, kLargeN, 100);
  ASSERT_EQ(map.size(), 1u);
  EXPECT_TRUE(map[0].valid);
  EXPECT_NEAR(map[0].transition, 11.0, 1e-12);
  EXPECT_EQ(map[0].nearest_odd, 11);
  EXPECT_EQ(map[0].inverse, ladder::kSharpnessCap);
}

TEST(SharpnessMap, RowMajorOrderAndThreadIndependence) {
  const ModelParams p = large(0.5, 0.5);
  const std::vector<double> g1s{0.2, 0.4, 0.6};
  const std::vector<double> g2s{0.1, 0.3};
  const auto a = ladder::resonance_sharpness_map(p, g1s, g2s, 2, 3, kLargeN, 100, 1);
  const auto b = ladder::resonance_sharpness_map(p, g1s, g2s, 2, 3, kLargeN, 100, 3);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].g1, g1s[i % 3]);
    EXPECT_EQ(a[i].g2, g2s[i / 3]);
    EXPECT_EQ(a[i].transition, b[i].transition);
    EXPECT_NEAR(a[i].inverse, std::min(1.0 / std::abs(a[i].detuning), ladder::kSharpnessCap), 1e-12);
  }
}
