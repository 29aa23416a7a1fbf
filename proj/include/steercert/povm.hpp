#pragma once

#include <array>
#include <string>
#include <vector>

#include "steercert/linalg.hpp"

// POVMs and the fixed measurement families of the certification scheme.
//
// The scheme uses three settings of three-outcome qubit measurements per
// party. Alice's ideal elements are (2/3)|e_{a,x}><e_{a,x}| built from three
// trine-like vector triples, one triple per great circle of the Bloch sphere;
// Bob's ideal elements are (2/3)|f_{a,x}><f_{a,x}| where f_{a,x} is the state
// orthogonal to the complex conjugate of e_{a,x}. That pairing makes every
// same-setting, same-outcome joint probability on the maximally entangled
// state vanish, which is what the steering functional rewards.

namespace steercert {

struct Povm {
  int dim = 0;
  std::vector<Mat> elements;

  int outcomes() const { return static_cast<int>(elements.size()); }
};

struct PovmViolation {
  int element;        // -1 for whole-set checks such as completeness
  std::string check;  // "shape", "finite", "hermitian", "psd", "complete"
  double magnitude;
};

// Checks element shapes, finiteness, hermiticity, positive semidefiniteness
// and completeness (sum to identity), all at construction tolerance. Returns
// an empty vector for a valid POVM.
std::vector<PovmViolation> validate(const Povm& p);

// Three measurement settings acting on the same space.
struct MeasurementSet {
  std::array<Povm, 3> settings;

  int dim() const { return settings[0].dim; }
};

struct MeasurementViolation {
  int setting;
  PovmViolation violation;
};

// Validates each setting as a POVM and additionally requires a common
// dimension and exactly three outcomes per setting ("outcomes" check).
std::vector<MeasurementViolation> validate(const MeasurementSet& set);

// Ideal measurement vectors, outcome a in {0,1,2}, setting x in {0,1,2}.
Ket alice_vector(int a, int x);
Ket bob_vector(int a, int x);

// The ideal measurement sets. Elements are (2/3) times the projector onto the
// corresponding vector; each setting sums to the identity exactly.
MeasurementSet alice_ideal();
MeasurementSet bob_ideal();

struct ExtremalityReport {
  // True when every element has rank <= 1, the regime where linear
  // independence of the elements decides extremality. When false, the
  // criterion does not apply and `extremal` is meaningless.
  bool applicable = false;
  bool extremal = false;
  std::vector<int> element_ranks;
  // Dimension of the operator span of the nonzero elements.
  int span_dimension = 0;
};

// Rank-one extremality test: flatten each nonzero element to a dim^2 vector,
// stack them, and compare the matrix rank (singular values above 1e-9)
// against the number of nonzero elements.
ExtremalityReport check_extremality(const Povm& p);

// Compresses a POVM onto the range of an orthogonal projector: elements
// become V^dag N V where the columns of V are a deterministic orthonormal
// basis of range(projector) (Gram-Schmidt over the projector's columns in
// index order, each basis vector in canonical phase). The output dimension is
// rank(projector); completeness survives automatically because
// V^dag (sum N) V = V^dag V = identity.
Povm project_povm(const Povm& p, const Mat& projector);

// Elements u N u^dag; models a change of basis on the measured system.
Povm conjugated(const Povm& p, const Mat& u);
MeasurementSet conjugated(const MeasurementSet& set, const Mat& u);

// Elements N (x) identity(factor); extends measurements to an enlarged system
// that carries an ancilla in a trailing tensor slot (matching purify()).
Povm extend_with_identity(const Povm& p, int factor);
MeasurementSet extend_with_identity(const MeasurementSet& set, int factor);

}  // namespace steercert
