#pragma once

#include <array>
#include <optional>

#include "steercert/scenario.hpp"

// White-noise robustness of the certification scheme. Noise enters in two
// places: each of Bob's elements is mixed with (2/3)(1/2)*identity at rate
// epsilon, and the shared state is mixed with the maximally mixed state at
// rate epsilon_s, optionally around an imbalanced rather than maximally
// entangled ket. Closed forms for the resulting W are provided next to a
// direct density-matrix simulation so the two can be cross-validated on
// sweep grids.
//
// Convention for delta: the amplitude deficit of the second basis component,
// ket proportional to |00> + (1 - delta)|11>. delta = 0 is maximally
// entangled, delta = 1 is the product state |00>.

namespace steercert {

struct NoiseConfig {
  double epsilon = 0;    // common measurement noise, [0, 1]
  double delta = 0;      // state imbalance
  std::optional<double> epsilon_s;  // state noise, [0, 2/3]; defaults to epsilon
  // Per-element measurement noise, indexed [setting][outcome]; overrides
  // epsilon when present.
  std::optional<std::array<std::array<double, 3>, 3>> per_element_epsilons;

  // Largest noise rate present: max of the per-element values (or epsilon)
  // and epsilon_s. The single-parameter closed forms are evaluated here.
  double effective_epsilon() const;
  std::vector<std::string> validate() const;
};

// Elements (2/3)((1 - eps)|f><f| + (eps/2) * identity) around the ideal
// complement vectors. eps = 0 reproduces bob_ideal exactly (same bits);
// eps = 1 is the trivial measurement with all elements identity/3.
MeasurementSet noisy_bob(double epsilon);

// Per-element noise rates, indexed [setting][outcome]. Each setting is a
// complete POVM only when its three rates coincide; heterogeneous rates are
// a formal family used by the max-substitution analysis and may fail
// validate() on completeness.
MeasurementSet noisy_bob(const std::array<std::array<double, 3>, 3>& eps);

// (|00> + (1 - delta)|11>) / norm on C^2 (x) C^2.
Ket imbalanced_ket(double delta);

// (1 - 2 eps_s) |psi_delta><psi_delta| + (eps_s / 2) * identity, a unit-trace
// PSD 4x4 matrix. Throws when eps_s pushes an eigenvalue negative
// (eps_s > 2/3).
Mat noisy_state(double epsilon_s, double delta);

// W for the common-noise configuration at delta = 0: 3 - 3 eps + 2 eps^2.
// Valid for eps in [0, 2/3], the range where noisy_state exists.
double w_closed_form_epsilon(double epsilon);

// Each of the nine same-setting equal-outcome probabilities in that
// configuration: eps (3 - 2 eps) / 9.
double diagonal_cell_epsilon(double epsilon);

// Sum of the nine diagonal probabilities for the two-parameter family
// (imbalance delta, common noise eps); W = 3 - f. The rational form has a
// guard on its denominator, although the denominator never vanishes for real
// delta (magnitude stays >= 1.5).
double f_closed_form(double delta, double epsilon);
double w_closed_form_delta(double delta, double epsilon);

// Smallest eps at which w_closed_form_epsilon drops to beta; the noise level
// where the observed value stops witnessing steering against that bound.
double epsilon_crossing(double beta);

struct SweepRow {
  double delta;
  double epsilon;   // value actually used (after clipping)
  double w_closed;
  double w_sim;
  double discrepancy;
  bool clipped;     // epsilon was pulled back into [0, 2/3]
};

// Rows ordered lexicographically by (delta, epsilon) in the given grid
// order. Each row compares w_closed_form_delta against a full simulation
// through distribution_from on noisy_state + noisy_bob. Out-of-range epsilon
// values are clipped rather than failing a long sweep; clipped rows are
// flagged. Row evaluation may run in parallel; ordering is by grid position,
// never completion order.
std::vector<SweepRow> sweep(const std::vector<double>& deltas,
                            const std::vector<double>& epsilons,
                            bool parallel = true);

}  // namespace steercert
