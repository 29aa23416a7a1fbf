#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "steercert/constants.hpp"

// Small dense complex linear algebra for few-qubit work: kets with enforced
// normalization, tensor products, partial traces, Hermitian eigensystems,
// Schmidt decomposition and purification. Eigen does the heavy lifting; the
// wrappers fix conventions (index order, phase, eigenvalue order) that the
// rest of the library depends on.

namespace steercert {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

bool is_hermitian(const Mat& m, double tol = tol::decomposition);
// Hermitian and all eigenvalues >= -tol.
bool is_psd(const Mat& m, double tol = tol::decomposition);
bool is_identity(const Mat& m, double tol = tol::decomposition);
bool is_unitary(const Mat& m, double tol = tol::decomposition);

// Largest singular value.
double operator_norm(const Mat& m);
double frobenius_distance(const Mat& a, const Mat& b);

// Multiplies v by a unit phase so that the first entry with |v_i| > tol is
// real and positive. Kets that differ by a global phase map to the same
// representative; the zero vector is returned unchanged.
CVec canonical_phase(const CVec& v, double tol = tol::construction);

// A normalized pure state. Construction rejects vectors whose Euclidean norm
// differs from 1 by more than tol::construction; use Ket::normalized to build
// one from a raw vector. Composite indices follow row-major convention:
// entry i*dim_b + j is coefficient of |i>_A |j>_B.
class Ket {
 public:
  explicit Ket(CVec amplitudes);
  static Ket normalized(CVec raw);

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVec& amplitudes() const { return amp_; }
  Complex operator[](Eigen::Index i) const { return amp_(i); }

  Mat projector() const { return amp_ * amp_.adjoint(); }
  Ket conjugated() const { return Ket(amp_.conjugate()); }
  Ket canonical() const { return Ket(canonical_phase(amp_)); }

  Complex inner(const Ket& other) const { return amp_.dot(other.amp_); }

 private:
  CVec amp_;
};

// For a qubit ket e, the unique (up to phase) ket with <f|e> = 0, returned in
// canonical phase.
Ket orthogonal_qubit(const Ket& e);

Mat tensor(const Mat& a, const Mat& b);
CVec tensor(const CVec& a, const CVec& b);
Ket tensor(const Ket& a, const Ket& b);

// Partial traces of an operator on C^{dim_a} (x) C^{dim_b}.
Mat partial_trace_a(const Mat& m, int dim_a, int dim_b);
Mat partial_trace_b(const Mat& m, int dim_a, int dim_b);

// [[a, 0], [0, b]].
Mat block_diag(const Mat& a, const Mat& b);

struct EigSystem {
  Eigen::VectorXd values;  // ascending
  Mat vectors;             // orthonormal columns, vectors.col(k) <-> values(k)
};

// Eigensystem of a Hermitian matrix. Throws std::invalid_argument if m is not
// Hermitian within tol.
EigSystem eig_hermitian(const Mat& m, double tol = tol::decomposition);

struct SchmidtForm {
  std::vector<double> coefficients;  // descending, all above the truncation cut
  std::vector<Ket> left;             // dim_a
  std::vector<Ket> right;            // dim_b
  int rank() const { return static_cast<int>(coefficients.size()); }
};

// Schmidt decomposition of a bipartite ket, computed from the eigensystem of
// the reduced state on A. Coefficients at or below coefficient_cut are
// truncated (their squares are below machine noise for the default cut).
SchmidtForm schmidt_decompose(const Ket& psi, int dim_a, int dim_b,
                              double coefficient_cut = tol::certification);

// The two-qubit state (|00> + |11>)/sqrt(2).
Ket phi_plus();

// Embeds a C^2 (x) C^2 ket into C^2 (x) C^d by placing Bob's amplitudes in
// the first two coordinates. Requires d >= 2.
Ket embed_bob(const Ket& psi, int dim_b);

// Purification of a density matrix on C^{dim_a} (x) C^{dim_b}: returns a ket
// on C^{dim_a} (x) C^{dim_b * r} with r = rank(rho), arranged so that tracing
// out the rank factor (the trailing tensor slot of the B side) recovers rho.
// Operators N on the original B side act as N (x) 1_r on the purified B side.
Ket purify(const Mat& rho, int dim_a, int dim_b);

// Uniform double in [0, 1) built directly from the top 53 bits of the
// generator output. Used instead of std::uniform_real_distribution, whose
// output sequence is implementation-defined and would break the byte-identical
// reproducibility contract of the CLI.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace steercert
