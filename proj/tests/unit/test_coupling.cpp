#include <cmath>

#include <gtest/gtest.h>

#include "ladder/coupling.hpp"
#include "ladder/errors.hpp"
#include "ladder/oscillator.hpp"
#include "oracles.hpp"

using ladder::MatrixElementMethod;
using ladder::ModelParams;
using ladder::OscillatorMatrixElementRequest;

namespace {

ModelParams desk(double g1, double g2, std::int64_t n0 = 400) {
  return ModelParams::from_couplings(0, 11, 24, g1, g2, n0);
}

double element(const ModelParams& p, int j, int k, std::int64_t n, std::int64_t m,
               MatrixElementMethod method) {
  return ladder::v_matrix_element(p, OscillatorMatrixElementRequest{j, k, n, m, method});
}

}  // namespace

TEST(CouplingFunctions, VanishWithoutCoupling) {
  const ladder::CouplingSample s = ladder::coupling_functions(ModelParams(0, 11, 24, 0, 0, 1), 2.5);
  EXPECT_EQ(s.f12, 0.0);
  EXPECT_EQ(s.f13, 0.0);
  EXPECT_EQ(s.f23, 0.0);
}

TEST(CouplingFunctions, TwoLevelClosedForm) {
  const double u = 0.35;
  const ModelParams p(0, 11, 24, u, 0.0, 1);
  for (double y : {-7.0, -1.0, 0.3, 2.0, 9.0}) {
    const ladder::CouplingSample s = ladder::coupling_functions(p, y);
    const double expected = oracle::two_level_mixing_rate(0, 11, u, y);
    EXPECT_NEAR(std::abs(s.f12), expected, 1e-6 * expected) << "y = " << y;
    EXPECT_EQ(s.f13, 0.0);
    EXPECT_EQ(s.f23, 0.0);
  }
}

TEST(CouplingFunctions, FullProductMatrixIsAntisymmetric) {
  const ModelParams p = ModelParams(0, 11, 24, 0.8, 0.6, 1);
  for (double y : {0.5, 3.0, 12.0}) {
    const Eigen::Matrix3d a = ladder::basis_derivative_products(p, y, 1e-4);
    const double sym = (a + a.transpose()).norm();
    EXPECT_LE(sym, 1e-6 * (a - a.transpose()).norm());
    const Eigen::Matrix3d m = ladder::coupling_functions(p, y).matrix();
    EXPECT_TRUE(m.isApprox(-m.transpose()));
  }
}

TEST(CouplingFunctions, CentralDifferencesConvergeAtSecondOrder) {
  const ModelParams p = ModelParams(0, 11, 24, 0.8, 0.6, 1);
  const double y = 3.0;
  const double h = 0.2;
  const double d1 = ladder::basis_derivative_products(p, y, h)(0, 1);
  const double d2 = ladder::basis_derivative_products(p, y, h / 2)(0, 1);
  const double d3 = ladder::basis_derivative_products(p, y, h / 4)(0, 1);
  const double order = std::log2(std::abs(d1 - d2) / std::abs(d2 - d3));
  EXPECT_NEAR(order, 2.0, 0.2);
}

TEST(CouplingFunctions, MirrorParity) {
  // The 1-2 and 2-3 functions are even in y and the 1-3 function is odd in the
  // continuous gauge.
  const ModelParams p = ModelParams(0, 11, 24, 0.8, 0.6, 1);
  for (double y : {0.4, 2.0, 6.0}) {
    const ladder::CouplingSample a = ladder::coupling_functions(p, y);
    const ladder::CouplingSample b = ladder::coupling_functions(p, -y);
    EXPECT_NEAR(a.f12, b.f12, 1e-7 * std::abs(a.f12));
    EXPECT_NEAR(a.f23, b.f23, 1e-7 * std::abs(a.f23));
    EXPECT_NEAR(a.f13, -b.f13, 1e-7 * std::abs(a.f13) + 1e-14);
  }
}

TEST(VElement, VanishesForDecoupledTransition) {
  const ModelParams p(0, 11, 24, 0.0, 0.02, 400);
  EXPECT_NEAR(element(p, 1, 2, 40, 29, MatrixElementMethod::hermite_quadrature), 0.0, 1e-14);
  EXPECT_NEAR(element(p, 1, 2, 40, 29, MatrixElementMethod::fock_window), 0.0, 1e-14);
}

TEST(VElement, ParitySelection) {
  const ModelParams p = desk(0.6, 0.5);
  for (int dn = 1; dn <= 8; ++dn) {
    for (MatrixElementMethod method :
         {MatrixElementMethod::hermite_quadrature, MatrixElementMethod::fock_window}) {
      const double v12 = element(p, 1, 2, 60, 60 - dn, method);
      const double v13 = element(p, 1, 3, 60, 60 - dn, method);
      if (dn % 2 == 1) {
        EXPECT_GT(std::abs(v12), 1e-8);
        EXPECT_LE(std::abs(v13), 1e-10);
      } else {
        EXPECT_LE(std::abs(v12), 1e-10);
        EXPECT_GT(std::abs(v13), 1e-8);
      }
    }
  }
}

TEST(VElement, Hermitian) {
  const ModelParams p = desk(0.6, 0.5);
  for (auto [j, k, dn] : {std::tuple{1, 2, 3}, std::tuple{2, 3, 5}, std::tuple{1, 3, 4}}) {
    for (MatrixElementMethod method :
         {MatrixElementMethod::hermite_quadrature, MatrixElementMethod::fock_window}) {
      const double a = element(p, j, k, 80, 80 - dn, method);
      const double b = element(p, k, j, 80 - dn, 80, method);
      EXPECT_NEAR(a, b, 1e-8 * std::abs(a));
    }
  }
}

TEST(VElement, MethodsAgreeAtModerateOccupation) {
  const ModelParams p = desk(0.5, 0.15, 500);
  for (int dn : {11, 13, 15}) {
    const double h = element(p, 1, 2, 500, 500 - dn, MatrixElementMethod::hermite_quadrature);
    const double f = element(p, 1, 2, 500, 500 - dn, MatrixElementMethod::fock_window);
    EXPECT_NEAR(h, f, 1e-6 * std::abs(f)) << "dn = " << dn;
  }
}

TEST(VElement, MultiphotonSuppressionAtLargeOccupation) {
  const ModelParams p = desk(0.6, 0.18, 100000000);
  double previous = INFINITY;
  for (int dn = 11; dn <= 25; dn += 2) {
    const double v =
        std::abs(element(p, 1, 2, p.n0(), p.n0() - dn, MatrixElementMethod::fock_window));
    EXPECT_LT(v, previous) << "dn = " << dn;
    previous = v;
  }
}

TEST(VElement, RejectsBadRequests) {
  const ModelParams p = desk(0.6, 0.5);
  EXPECT_THROW(element(p, 1, 1, 10, 9, MatrixElementMethod::hermite_quadrature),
               ladder::InvalidArgument);
  EXPECT_THROW(element(p, 1, 2, -1, 9, MatrixElementMethod::hermite_quadrature),
               ladder::InvalidArgument);
  EXPECT_THROW(element(p, 1, 2, 6000, 5989, MatrixElementMethod::hermite_quadrature),
               ladder::InvalidArgument);
  EXPECT_THROW(ladder::parse_matrix_element_method("simpson"), ladder::InvalidArgument);
}

TEST(AdiabaticElement, SymmetricAndParitySelected) {
  const ModelParams p = desk(0.5, 0.3, 100000000);
  const std::int64_t n = p.n0();
  const double a = ladder::adiabatic_v_element(p, 1, 2, n, n - 13);
  const double b = ladder::adiabatic_v_element(p, 2, 1, n - 13, n);
  EXPECT_GT(std::abs(a), 0.0);
  EXPECT_NEAR(a, b, 1e-8 * std::abs(a));
  EXPECT_LE(std::abs(ladder::adiabatic_v_element(p, 1, 2, n, n - 12)), 1e-10 * std::abs(a));
}

TEST(WExpectation, ZeroWithoutCoupling) {
  const ModelParams p(0, 11, 24, 0, 0, 100);
  for (MatrixElementMethod method :
       {MatrixElementMethod::hermite_quadrature, MatrixElementMethod::fock_window}) {
    for (double w : ladder::w_expectation(p, 30, method)) EXPECT_EQ(w, 0.0);
  }
}

TEST(WExpectation, SmallAtLargeOccupation) {
  const ModelParams p = desk(0.5, 0.5, 100000000);
  for (double w : ladder::w_expectation(p, p.n0(), MatrixElementMethod::fock_window)) {
    EXPECT_LT(std::abs(w), 0.1);
  }
}

TEST(WExpectation, TwoLevelClosedForm) {
  const double u = 0.3;
  const int n = 20;
  const ModelParams p(0, 11, 24, u, 0.0, 1);
  // (1/2) int phi_n^2 f12^2 dy on a fine trapezoid grid.
  const double h = 1e-3;
  double sum = 0.0;
  for (double y = -15.0; y <= 15.0; y += h) {
    const double phi = ladder::hermite_functions(n + 1, y)[n];
    const double f = oracle::two_level_mixing_rate(0, 11, u, y);
    sum += phi * phi * f * f * h;
  }
  const double expected = 0.5 * sum;
  for (MatrixElementMethod method :
       {MatrixElementMethod::hermite_quadrature, MatrixElementMethod::fock_window}) {
    const auto w = ladder::w_expectation(p, n, method);
    EXPECT_NEAR(w[0], expected, 1e-6 * expected);
    EXPECT_NEAR(w[1], expected, 1e-6 * expected);
    EXPECT_NEAR(w[2], 0.0, 1e-15);
  }
}
