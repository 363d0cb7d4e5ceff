#pragma once

// Eigenfunctions of the single-level oscillator problem
//   (1/2)(-d2/dy2 + y2) + E_j(y)
// on a local DVR window, labelled by their mean occupation number.

#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "ladder/oscillator.hpp"

namespace ladder::detail {

/// Number-state coefficients (over the DVR window) of the eigenfunction whose
/// mean occupation is nearest n. nullopt when the state carries more than a
/// tiny weight on the outermost window states (window too narrow) or when no
/// eigenfunction has mean occupation within 1/2 of n.
std::optional<Eigen::VectorXd> adiabatic_oscillator_state(const FockDvr& dvr,
                                                          std::span<const double> level_at_nodes,
                                                          std::int64_t n);

inline constexpr std::int64_t kAdiabaticReach = 128;
inline constexpr std::int64_t kMaxAdiabaticReach = 4096;

}  // namespace ladder::detail
