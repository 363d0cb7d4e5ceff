#pragma once

#include <array>
#include <cstdint>

namespace ladder {

/// Physical constants of the ladder model. Energies are in units of the
/// oscillator quantum (hbar*omega0 == 1 throughout the library).
///
/// The three bare levels e1 < e2 < e3 are coupled 1<->2 with strength u and
/// 2<->3 with strength v, each multiplied by (a + a^dagger). n0 is the
/// reference oscillator occupation used to define the dimensionless
/// couplings g1 = u*sqrt(n0)/(e2-e1) and g2 = v*sqrt(n0)/(e3-e2).
class ModelParams {
 public:
  static constexpr double kDefaultMinGap = 1e-6;

  /// Throws InvalidArgument unless e1 < e2 < e3 (by at least min_gap),
  /// u, v >= 0 and n0 >= 1.
  ModelParams(double e1, double e2, double e3, double u, double v, std::int64_t n0,
              double min_gap = kDefaultMinGap);

  /// Builds parameters from dimensionless couplings at occupation n0.
  static ModelParams from_couplings(double e1, double e2, double e3, double g1, double g2,
                                    std::int64_t n0, double min_gap = kDefaultMinGap);

  double e1() const noexcept { return e_[0]; }
  double e2() const noexcept { return e_[1]; }
  double e3() const noexcept { return e_[2]; }
  /// Bare energy of level j in {1,2,3}.
  double bare(int j) const;
  const std::array<double, 3>& bare_levels() const noexcept { return e_; }

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  std::int64_t n0() const noexcept { return n0_; }
  double min_gap() const noexcept { return min_gap_; }

  double g1() const noexcept;
  double g2() const noexcept;

  /// Same levels and n0, new couplings given as (g1, g2).
  ModelParams with_couplings(double g1, double g2) const;
  /// Same levels and couplings, different reference occupation. The physical
  /// u, v are kept, so g1 and g2 change.
  ModelParams with_n0(std::int64_t n0) const;
  /// Same levels, couplings rescaled so (g1, g2) are preserved at the new n0.
  ModelParams rescaled_to(std::int64_t n0) const;
  /// All three bare levels shifted by a constant.
  ModelParams shifted(double offset) const;

 private:
  std::array<double, 3> e_;
  double u_;
  double v_;
  std::int64_t n0_;
  double min_gap_;
};

/// Throws InvalidArgument unless j is a level index in {1,2,3}.
void check_level(int j);

}  // namespace ladder
