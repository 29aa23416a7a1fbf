#pragma once

#include <array>

#include "steercert/scenario.hpp"

// Bound on the steering functional over local hidden state models.
//
// For models where the hidden states are pure qubits, W is bounded by 3 minus
// the minimum over pure states psi of
//
//   obj(psi) = sum_x min_a <per-outcome term of (a, x) on psi>
//
// Two conventions for the per-outcome term are in circulation and both are
// reported side by side:
//
//   * Born probability Tr(M_{a,x} rho_psi), minimized over the full Bloch
//     sphere. This is the normalized reading (terms per setting sum to 1)
//     and the value it produces is attained by an explicit deterministic
//     model, see attaining_model()  ->  BoundResult.beta_unrestricted.
//   * unit-weight overlap |<e_{a,x}|psi>|^2 = 1.5 * Born term, minimized over
//     the reduced domain theta in [0, pi/2], phi in [0, pi]. This convention
//     reproduces the commonly quoted 2.673  ->  BoundResult.beta_L.
//
// The terms differ only by the constant factor, so one kernel serves both;
// the headline beta_L additionally restricts the search domain.

namespace steercert {

// Pure qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct BlochPoint {
  double theta = 0;
  double phi = 0;

  Ket ket() const;
  std::array<double, 3> direction() const;  // (x, y, z) on the unit sphere
};

struct Domain {
  double theta_max;
  double phi_max;

  static Domain full_sphere();
  static Domain quarter_sphere();
};

// Born-convention objective sum_x min_a Tr(M_{a,x} |psi><psi|), evaluated
// with plain complex arithmetic. Value lies in [0, 1] for a valid set. This
// is the reference implementation; the grid scans below use a real-valued
// Bloch kernel instead and are tested against this function.
double lhs_objective(const BlochPoint& p, const MeasurementSet& alice);

// 1.5 * lhs_objective; for elements (2/3)|e><e| this is the unit-weight
// overlap objective sum_x min_a |<e_{a,x}|psi>|^2.
double overlap_objective(const BlochPoint& p, const MeasurementSet& alice);

struct GridCell {
  double value;  // Born convention
  BlochPoint point;
};

// The k smallest Born-objective values over an n x n inclusive grid on the
// domain, ascending, ties broken by flat grid index. The parallel path
// reduces per-thread candidate lists with the same ordering, so the result
// is identical for any thread count. Requires n >= 2 and k >= 1.
std::vector<GridCell> scan_objective_grid(const MeasurementSet& alice,
                                          const Domain& domain, int n, int k,
                                          bool parallel);

// Serial scan through lhs_objective (complex arithmetic path). Slow; exists
// as an independent check of the Bloch kernel and as the benchmark baseline.
GridCell scan_objective_grid_reference(const MeasurementSet& alice,
                                       const Domain& domain, int n);

struct OptimizerConfig {
  int grid = 512;                   // grid points per axis, >= 2
  int refine_starts = 10;           // simplex starts taken from the best grid cells
  int max_refine_iterations = 200;  // per start
  double refine_tol = 1e-9;         // simplex diameter at which to stop
  bool parallel = true;
};

struct BoundResult {
  double beta_L;                  // reduced domain, unit-weight convention
  BlochPoint argmin;
  double objective_at_argmin;     // 3 - beta_L, unit-weight convention

  double beta_unrestricted;       // full sphere, Born convention
  BlochPoint argmin_unrestricted;
  double objective_unrestricted;  // 3 - beta_unrestricted

  int grid_resolution;
  long refinement_iterations;     // simplex iterations, all starts and domains
};

// Two-phase search on both domains: coarse grid, then Nelder-Mead from the
// best refine_starts cells (projected onto the domain for the reduced-domain
// value). Deterministic for a fixed config, including under OpenMP.
BoundResult optimize_bound(const MeasurementSet& alice,
                           const OptimizerConfig& config = {});

// Independent route to the same bounds through the 27 deterministic response
// strategies g: {settings} -> {outcomes}. For each g the inner optimization
// is solved in closed form: the Born value is an eigenvalue of
// sum_x M_{g(x),x} and the reduced-domain overlap value is an exact linear
// minimization over the quarter sphere. No grids, no iterative optimizers.
struct StrategyCheck {
  double beta_recipe;                // matches BoundResult.beta_L
  double beta_unrestricted;          // matches BoundResult.beta_unrestricted
  std::array<int, 3> best_strategy;  // argmin strategy for the unrestricted bound
};

StrategyCheck strategy_cross_check(const MeasurementSet& alice);

// One-component deterministic model attaining the unrestricted bound: the
// hidden state is the bottom eigenvector of the best strategy operator and
// the response follows that strategy. Feeding it through
// distribution_from_lhs and steering_functional reproduces
// StrategyCheck.beta_unrestricted, closing the loop between the optimizer
// and an actually realizable model.
LhsModel attaining_model(const MeasurementSet& alice);

}  // namespace steercert
