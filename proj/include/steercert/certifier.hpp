#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "steercert/scenario.hpp"

// Device-independent certification of Bob's side. Given a claimed state on
// C^2 (x) C^d and Bob's d-dimensional measurement set, the certifier checks
// whether the pair reproduces the maximal value W = 3 (all nine diagonal
// probabilities zero) and, if so, constructs the local unitary that maps the
// pair onto the reference pair: the maximally entangled two-qubit state and
// the ideal complement measurements, up to junk outside the state's support.
//
// The construction follows the structure of the uniqueness proof: take the
// Schmidt frame of the state, rotate Bob's support onto the conjugate Schmidt
// basis, and read everything else off in that frame. Each algebraic step of
// the proof has a numerical residual that verify_identity_chain exposes, so
// a near-miss input reports which step broke and by how much.

namespace steercert {

struct CertificationInput {
  Ket state;           // on C^2 (x) C^{dim_b}
  int dim_b;
  MeasurementSet bob;  // acting on C^{dim_b}

  CertificationInput(Ket s, int d, MeasurementSet b);
};

// Thrown when the state's Schmidt rank across the A|B cut is 1; a product
// state steers nothing and cannot be certified.
struct NotEntangledError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Largest of the nine same-setting equal-outcome probabilities
// p(a, a | x, x), with Alice fixed to her trusted ideal measurements. Zero
// within tolerance is the maximal-violation condition.
double check_max_violation_conditions(const CertificationInput& input);

struct ExtractedFrame {
  Mat u_b;              // d x d unitary rotating Bob's side into the reference frame
  Mat p_b;              // 2 x 2 PSD operator sqrt(2) sum_i lambda_i |s_i*><s_i*|
  Mat pi_b;             // d x d projector onto the Schmidt support, original frame
  SchmidtForm schmidt;  // rank 2, canonicalized for reproducibility
};

// Builds the rotation. Throws NotEntangledError on Schmidt rank 1. With a
// degenerate Schmidt spectrum the frame is pinned by diagonalizing the first
// measurement element with a spectral gap on the support, then fixing phases,
// so repeated runs agree to the last bit.
ExtractedFrame extract_unitary(const CertificationInput& input);

struct CertificationReport {
  bool passed;
  double tolerance;
  double max_diagonal_probability;
  double state_fidelity;             // against the maximally entangled state
  double measurement_deviation;      // max operator-norm gap to the ideal elements
  double p_b_identity_deviation;     // operator-norm gap of P_B from identity
  Mat extracted_unitary;
};

// Runs the full check: maximal-violation conditions, frame extraction, state
// fidelity and measurement comparison in the rotated support frame. passed
// requires max_diagonal_probability, 1 - state_fidelity and
// measurement_deviation to all be within the tolerance; the P_B gap is
// reported but informational (an identity P_B is implied by the others).
CertificationReport certify(const CertificationInput& input,
                            double tolerance = tol::certification);

struct IdentityResidual {
  std::string name;
  double residual;
};

// Residuals of the individual algebraic identities the uniqueness argument
// chains together, evaluated in the rotated support frame. All of them are
// zero for an exact maximal violation; for a perturbed input the residual
// pattern localizes the failing identity. Requires the input to be at least
// approximately maximal (max diagonal probability <= 1e-3); grossly
// non-maximal inputs are rejected since the chain presumes near-zero cells.
std::vector<IdentityResidual> verify_identity_chain(const CertificationInput& input);

}  // namespace steercert
