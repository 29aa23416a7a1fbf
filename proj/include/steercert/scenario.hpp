#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "steercert/povm.hpp"

// The one-sided scenario: Alice holds a trusted qubit, Bob an untrusted
// system of any dimension. Both pick one of three settings with three
// outcomes. The steering functional
//
//   W = 3 - sum_{a,x} p(a, a | x, x)
//
// rewards never seeing equal outcomes under equal settings. Its value can be
// computed either from the joint distribution directly or from Alice's
// measurements applied to the assemblage Bob steers her into; both forms are
// provided and must agree.

namespace steercert {

// Conditional states on Alice's qubit, sigma[y][b] = Tr_B[(1 (x) N_y^b) rho],
// normalized so that sum_b Tr sigma[y][b] = 1 for every setting y.
struct Assemblage {
  std::array<std::array<Mat, 3>, 3> sigma;
};

// Checks PSD members, per-setting trace normalization, and that the
// unconditioned state sum_b sigma[y][b] does not depend on y (no signaling
// from Bob's setting choice). Returns human-readable violation strings.
std::vector<std::string> validate(const Assemblage& as, double tol = tol::decomposition);

Assemblage assemblage_from(const Mat& rho, int dim_b, const MeasurementSet& bob);
Assemblage assemblage_from(const Ket& state, int dim_b, const MeasurementSet& bob);

// p(a, b | x, y) for x, y, a, b in 0..2.
class JointDistribution {
 public:
  double at(int x, int y, int a, int b) const { return p_[index(x, y, a, b)]; }
  double& at(int x, int y, int a, int b) { return p_[index(x, y, a, b)]; }

  // Nonnegativity, normalization of every (x, y) cell, and no-signaling of
  // each party's marginals across the other party's settings.
  std::vector<std::string> validate(double tol = tol::decomposition) const;

 private:
  static int index(int x, int y, int a, int b) {
    return ((x * 3 + y) * 3 + a) * 3 + b;
  }
  std::array<double, 81> p_{};
};

JointDistribution distribution_from(const Mat& rho, int dim_b,
                                    const MeasurementSet& alice,
                                    const MeasurementSet& bob);
JointDistribution distribution_from(const Ket& state, int dim_b,
                                    const MeasurementSet& alice,
                                    const MeasurementSet& bob);

double steering_functional(const JointDistribution& d);
double steering_functional(const Assemblage& as, const MeasurementSet& alice);

// Local hidden state model: Bob holds classical randomness lambda with weight
// w_lambda, sends Alice the qubit states[lambda], and answers setting y with
// outcome b at rate response[lambda][y][b]. Pure hidden states are enough:
// mixed ones are convex combinations and W is linear in the model.
struct LhsModel {
  std::vector<double> weights;
  std::vector<Ket> states;
  std::vector<std::array<std::array<double, 3>, 3>> response;

  int size() const { return static_cast<int>(weights.size()); }
};

std::vector<std::string> validate(const LhsModel& model, double tol = tol::construction);

JointDistribution distribution_from_lhs(const LhsModel& model,
                                        const MeasurementSet& alice);

struct ShotRecord {
  int x, y, a, b;
};

// Draws n shots with settings uniform over the nine (x, y) pairs and outcomes
// by inverse CDF over the cell, in a fixed traversal order. Identical seed
// and distribution give identical records on any platform.
std::vector<ShotRecord> sample_shots(const JointDistribution& d, std::size_t n,
                                     std::uint64_t seed);

struct WEstimate {
  double w_hat;
  double std_error;  // binomial error of the three diagonal blocks, combined
  std::array<std::size_t, 3> shots_per_diagonal_setting;
};

// Plug-in estimate of W from sampled shots. Throws if some diagonal setting
// pair (x, x) never occurs, since W is then undetermined by the data.
WEstimate estimate_w(const std::vector<ShotRecord>& shots);

}  // namespace steercert
