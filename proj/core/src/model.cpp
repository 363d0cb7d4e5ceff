#include "ladder/model.hpp"

#include <cmath>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

NearDegeneracy::NearDegeneracy(double y, double gap)
    : std::runtime_error("adiabatic levels within " + std::to_string(gap) +
                         " at y = " + std::to_string(y)),
      y_(y),
      gap_(gap) {}

void check_level(int j) {
  if (j < 1 || j > 3) {
    throw InvalidArgument("level index must be 1, 2 or 3 (got " + std::to_string(j) + ")");
  }
}

ModelParams::ModelParams(double e1, double e2, double e3, double u, double v, std::int64_t n0,
                         double min_gap)
    : e_{e1, e2, e3}, u_(u), v_(v), n0_(n0), min_gap_(min_gap) {
  for (double x : {e1, e2, e3, u, v, min_gap}) {
    if (!std::isfinite(x)) throw InvalidArgument("model parameters must be finite");
  }
  if (!(min_gap > 0.0)) throw InvalidArgument("min_gap must be positive");
  if (!(e2 - e1 >= min_gap && e3 - e2 >= min_gap)) {
    throw InvalidArgument("bare levels must satisfy e1 < e2 < e3 with gaps >= " +
                          std::to_string(min_gap));
  }
  if (u < 0.0 || v < 0.0) throw InvalidArgument("couplings u, v must be non-negative");
  if (n0 < 1) throw InvalidArgument("n0 must be >= 1");
}

ModelParams ModelParams::from_couplings(double e1, double e2, double e3, double g1, double g2,
                                        std::int64_t n0, double min_gap) {
  if (n0 < 1) throw InvalidArgument("n0 must be >= 1");
  const double root_n = std::sqrt(static_cast<double>(n0));
  return ModelParams(e1, e2, e3, g1 * (e2 - e1) / root_n, g2 * (e3 - e2) / root_n, n0, min_gap);
}

double ModelParams::bare(int j) const {
  check_level(j);
  return e_[static_cast<std::size_t>(j - 1)];
}

double ModelParams::g1() const noexcept {
  return u_ * std::sqrt(static_cast<double>(n0_)) / (e_[1] - e_[0]);
}

double ModelParams::g2() const noexcept {
  return v_ * std::sqrt(static_cast<double>(n0_)) / (e_[2] - e_[1]);
}

ModelParams ModelParams::with_couplings(double g1, double g2) const {
  return from_couplings(e_[0], e_[1], e_[2], g1, g2, n0_, min_gap_);
}

ModelParams ModelParams::with_n0(std::int64_t n0) const {
  return ModelParams(e_[0], e_[1], e_[2], u_, v_, n0, min_gap_);
}

ModelParams ModelParams::rescaled_to(std::int64_t n0) const {
  return from_couplings(e_[0], e_[1], e_[2], g1(), g2(), n0, min_gap_);
}

ModelParams ModelParams::shifted(double offset) const {
  return ModelParams(e_[0] + offset, e_[1] + offset, e_[2] + offset, u_, v_, n0_, min_gap_);
}

}  // namespace ladder
