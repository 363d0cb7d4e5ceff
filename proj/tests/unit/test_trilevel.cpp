#include <cmath>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "ladder/errors.hpp"
#include "ladder/model.hpp"
#include "ladder/trilevel.hpp"
#include "oracles.hpp"

using ladder::ModelParams;

namespace {

ModelParams desk(double u, double v) { return ModelParams(0.0, 11.0, 24.0, u, v, 100); }

struct RandomInstance {
  ModelParams params;
  double y;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> level(-30.0, 30.0);
  std::uniform_real_distribution<double> gap(0.1, 20.0);
  std::uniform_real_distribution<double> coupling(0.0, 3.0);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  const double e1 = level(rng);
  const double e2 = e1 + gap(rng);
  const double e3 = e2 + gap(rng);
  return {ModelParams(e1, e2, e3, coupling(rng), coupling(rng), 1), coord(rng)};
}

}  // namespace

TEST(Model, RejectsInvalidParameters) {
  EXPECT_THROW(ModelParams(0, 0, 1, 0.1, 0.1, 10), ladder::InvalidArgument);
  EXPECT_THROW(ModelParams(0, 2, 1, 0.1, 0.1, 10), ladder::InvalidArgument);
  EXPECT_THROW(ModelParams(0, 1, 2, -0.1, 0.1, 10), ladder::InvalidArgument);
  EXPECT_THROW(ModelParams(0, 1, 2, 0.1, 0.1, 0), ladder::InvalidArgument);
  EXPECT_THROW(ModelParams(0, 1e-7, 2, 0.1, 0.1, 1), ladder::InvalidArgument);
  EXPECT_NO_THROW(ModelParams(0, 1e-7, 2, 0.1, 0.1, 1, 1e-8));
}

TEST(Model, DimensionlessCouplingsRoundTrip) {
  const ModelParams p = ModelParams::from_couplings(0, 11, 24, 0.5, 0.3, 100000000);
  EXPECT_NEAR(p.g1(), 0.5, 1e-15);
  EXPECT_NEAR(p.g2(), 0.3, 1e-15);
  EXPECT_NEAR(p.u(), 0.5 * 11.0 / 1e4, 1e-18);
  const ModelParams r = p.rescaled_to(400);
  EXPECT_NEAR(r.g1(), 0.5, 1e-15);
  EXPECT_EQ(r.n0(), 400);
  EXPECT_DOUBLE_EQ(p.with_n0(400).u(), p.u());
  EXPECT_DOUBLE_EQ(p.shifted(7.3).e2(), 18.3);
}

TEST(Cubic, ZeroCouplingCoefficients) {
  const ladder::CubicCoefficients c = ladder::cubic_coefficients(desk(0, 0), 3.7);
  EXPECT_NEAR(c.alpha, 433.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.beta, 2590.0 / 27.0, 1e-12);
  for (double eps : {0.0 - 35.0 / 3.0, 11.0 - 35.0 / 3.0, 24.0 - 35.0 / 3.0}) {
    EXPECT_NEAR(eps * eps * eps - c.alpha * eps, c.beta, 1e-10);
  }
}

TEST(Cubic, CoefficientsMatchLiteralAndExpandedFormsOnRandomInstances) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 10000; ++i) {
    const RandomInstance r = random_instance(rng);
    const ModelParams& p = r.params;
    const ladder::CubicCoefficients c = ladder::cubic_coefficients(p, r.y);
    const double alpha = oracle::literal_alpha(p.e1(), p.e2(), p.e3(), p.u(), p.v(), r.y);
    const double beta = oracle::literal_beta(p.e1(), p.e2(), p.e3(), p.u(), p.v(), r.y);
    const auto expanded = oracle::expanded_alpha_beta(ladder::level_matrix(p, r.y));
    const double scale_a = std::max(1.0, std::abs(alpha));
    const double scale_b = std::max(1.0, std::pow(scale_a, 1.5));
    ASSERT_NEAR(c.alpha, alpha, 1e-11 * scale_a);
    ASSERT_NEAR(c.beta, beta, 1e-11 * scale_b);
    ASSERT_NEAR(expanded[0], alpha, 1e-10 * scale_a);
    ASSERT_NEAR(expanded[1], beta, 1e-10 * scale_b);
    ASSERT_LE(std::abs(4.0 * c.beta / std::pow(c.amp, 3)), 1.0 + 1e-10);
  }
}

TEST(Eigenvalues, DiagonalAtOrigin) {
  const auto e = ladder::eigenvalues_at(desk(0.7, 0.4), 0.0);
  EXPECT_NEAR(e[0], 0.0, 1e-12);
  EXPECT_NEAR(e[1], 11.0, 1e-12);
  EXPECT_NEAR(e[2], 24.0, 1e-12);
}

TEST(Eigenvalues, FactorisedTwoLevelCase) {
  // 2 u^2 y^2 = 16 with V = 0: roots 3 +- 5 and 24.
  const ModelParams p(0, 6, 24, 2.0, 0.0, 1);
  const auto e = ladder::eigenvalues_at(p, std::sqrt(2.0));
  EXPECT_NEAR(e[0], -2.0, 1e-12);
  EXPECT_NEAR(e[1], 8.0, 1e-12);
  EXPECT_NEAR(e[2], 24.0, 1e-12);
}

TEST(Eigenvalues, MatchJacobiOracle) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const RandomInstance r = random_instance(rng);
    const auto e = ladder::eigenvalues_at(r.params, r.y);
    const auto ref = oracle::jacobi_eigenvalues(ladder::level_matrix(r.params, r.y));
    for (int j = 0; j < 3; ++j) {
      ASSERT_NEAR(e[j], ref[j], 1e-10 * std::max(1.0, std::abs(ref[j])));
    }
  }
}

TEST(Eigenvalues, TraceEvenSymmetryAndRepulsion) {
  const ModelParams p = desk(0.9, 0.6);
  double previous_spread = 0.0;
  for (double y = 0.0; y <= 40.0; y += 0.25) {
    const auto e = ladder::eigenvalues_at(p, y);
    const auto m = ladder::eigenvalues_at(p, -y);
    EXPECT_NEAR(e[0] + e[1] + e[2], 35.0, 1e-10 * 35.0);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(e[j], m[j], 1e-12 * std::max(1.0, std::abs(e[j])));
    EXPECT_GE(e[2] - e[0], previous_spread - 1e-12);
    previous_spread = e[2] - e[0];
  }
}

TEST(Eigenvalues, ThirdLevelDecouplesWithoutV) {
  const ModelParams p = desk(0.3, 0.0);
  for (double y : {0.0, 1.0, 5.0, 10.0}) EXPECT_NEAR(ladder::eigenvalues_at(p, y)[2], 24.0, 1e-12);
}

TEST(Eigenbasis, IdentityAtOriginAndOrthonormalElsewhere) {
  const ModelParams p = desk(0.8, 0.5);
  EXPECT_TRUE(ladder::eigenbasis_at(p, 0.0).basis.isApprox(Eigen::Matrix3d::Identity(), 1e-14));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const RandomInstance r = random_instance(rng);
    const ladder::AdiabaticPoint a = ladder::eigenbasis_at(r.params, r.y);
    const Eigen::Matrix3d gram = a.basis.transpose() * a.basis;
    EXPECT_LE((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(a.basis.determinant(), 1.0, 1e-12);
    const Eigen::Matrix3d d = a.basis.transpose() * ladder::level_matrix(r.params, r.y) * a.basis;
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        if (j != k) {
          EXPECT_LE(std::abs(d(j, k)), 1e-9 * scale);
        }
      }
      EXPECT_NEAR(d(j, j), a.levels[static_cast<std::size_t>(j)], 1e-9 * scale);
    }
  }
}

TEST(Eigenbasis, TwoLevelRotationAngle) {
  const double u = 0.4;
  const ModelParams p(0, 11, 24, u, 0.0, 1);
  for (double y : {0.5, 3.0, 20.0}) {
    const ladder::AdiabaticPoint a = ladder::continuous_eigenbasis(p, y);
    const double angle = 0.5 * std::atan(2.0 * std::sqrt(2.0) * u * y / 11.0);
    EXPECT_NEAR(std::abs(a.basis(2, 2)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(a.basis(0, 0)), std::cos(angle), 1e-12);
    EXPECT_NEAR(std::abs(a.basis(1, 0)), std::sin(angle), 1e-12);
    const auto two = oracle::two_level_energies(0, 11, u, y);
    EXPECT_NEAR(a.levels[0], two[0], 1e-12);
    EXPECT_NEAR(a.levels[1], two[1], 1e-12);
  }
}

TEST(Eigenbasis, ReferenceOverlapFixesSigns) {
  const ModelParams p = desk(0.8, 0.5);
  const ladder::AdiabaticPoint a = ladder::eigenbasis_at(p, 2.0);
  const Eigen::Matrix3d flipped = -a.basis;
  const ladder::AdiabaticPoint b = ladder::eigenbasis_at(p, 2.0, flipped);
  for (int j = 0; j < 3; ++j) EXPECT_GT(b.basis.col(j).dot(flipped.col(j)), 0.0);
}

TEST(Eigenbasis, ContinuousGaugeIsSmoothAndMirrorSymmetric) {
  const ModelParams p = desk(0.8, 0.5);
  const Eigen::Matrix3d d = Eigen::Vector3d(1, -1, 1).asDiagonal();
  Eigen::Matrix3d previous = ladder::continuous_eigenbasis(p, 0.0).basis;
  for (double y = 0.05; y <= 30.0; y += 0.05) {
    const Eigen::Matrix3d basis = ladder::continuous_eigenbasis(p, y).basis;
    EXPECT_LE((basis - previous).cwiseAbs().maxCoeff(), 0.1);
    previous = basis;
    const Eigen::Matrix3d mirror = ladder::continuous_eigenbasis(p, -y).basis;
    EXPECT_LE((mirror - d * basis * d).cwiseAbs().maxCoeff(), 1e-12);
  }
}
