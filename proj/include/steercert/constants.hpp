#pragma once

// Central tolerance ladder. Every numeric gate in the library compares against
// one of these four rungs so the thresholds can be audited in one place.
//
//   construction   objects that are exact by construction (normalization,
//                  POVM completeness, hermiticity of inputs)
//   decomposition  outputs of eigen/Schmidt factorizations
//   certification  pass/fail gates in the certifier
//   reporting      round-trip, display and cross-implementation comparisons
namespace steercert::tol {

inline constexpr double construction = 1e-12;
inline constexpr double decomposition = 1e-10;
inline constexpr double certification = 1e-9;
inline constexpr double reporting = 1e-6;

}  // namespace steercert::tol
