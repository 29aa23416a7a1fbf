#include "steercert/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace steercert {

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const Mat& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool is_identity(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return is_identity(m.adjoint() * m, tol);
}

double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double frobenius_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frobenius_distance: shape mismatch");
  return (a - b).norm();
}

CVec canonical_phase(const CVec& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double mag = std::abs(v(i));
    if (mag > tol) return v * (std::conj(v(i)) / mag);
  }
  return v;
}

Ket::Ket(CVec amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0 || !amp_.allFinite())
    throw std::invalid_argument("Ket: empty or non-finite amplitudes");
  if (std::abs(amp_.norm() - 1.0) > tol::construction)
    throw std::invalid_argument("Ket: vector is not normalized");
}

Ket Ket::normalized(CVec raw) {
  double n = raw.norm();
  if (!std::isfinite(n) || n < 1e-12)
    throw std::invalid_argument("Ket::normalized: vector is zero or non-finite");
  return Ket(raw / n);
}

Ket orthogonal_qubit(const Ket& e) {
  if (e.dim() != 2) throw std::invalid_argument("orthogonal_qubit: need dim 2");
  CVec f(2);
  f << -std::conj(e[1]), std::conj(e[0]);
  return Ket(canonical_phase(f));
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

CVec tensor(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Ket tensor(const Ket& a, const Ket& b) {
  return Ket(tensor(a.amplitudes(), b.amplitudes()));
}

Mat partial_trace_a(const Mat& m, int dim_a, int dim_b) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace_a: shape mismatch");
  Mat out = Mat::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_a; ++i)
    out += m.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

Mat partial_trace_b(const Mat& m, int dim_a, int dim_b) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace_b: shape mismatch");
  Mat out = Mat::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int k = 0; k < dim_a; ++k)
      out(i, k) = m.block(i * dim_b, k * dim_b, dim_b, dim_b).trace();
  return out;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

EigSystem eig_hermitian(const Mat& m, double tol) {
  if (!is_hermitian(m, tol))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

SchmidtForm schmidt_decompose(const Ket& psi, int dim_a, int dim_b,
                              double coefficient_cut) {
  if (psi.dim() != dim_a * dim_b)
    throw std::invalid_argument("schmidt_decompose: dimension mismatch");
  // Amplitude matrix C with C(i,j) = <i,j|psi>; reduced state on A is C C^dag.
  Mat c(dim_a, dim_b);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_b; ++j) c(i, j) = psi[i * dim_b + j];
  EigSystem es = eig_hermitian(c * c.adjoint());

  SchmidtForm out;
  for (int k = dim_a - 1; k >= 0; --k) {
    double lambda = std::sqrt(std::max(0.0, es.values(k)));
    if (lambda <= coefficient_cut) break;
    CVec s = es.vectors.col(k);
    // If s is the left vector with weight lambda^2, the partner right vector
    // is C^T conj(s) / lambda.
    CVec t = (c.transpose() * s.conjugate()) / lambda;
    out.coefficients.push_back(lambda);
    out.left.push_back(Ket::normalized(s));
    out.right.push_back(Ket::normalized(t));
  }
  return out;
}

Ket phi_plus() {
  CVec v(4);
  v << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  return Ket(v);
}

Ket embed_bob(const Ket& psi, int dim_b) {
  if (psi.dim() != 4) throw std::invalid_argument("embed_bob: need a 4-dim ket");
  if (dim_b < 2) throw std::invalid_argument("embed_bob: need dim_b >= 2");
  CVec out = CVec::Zero(2 * dim_b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i * dim_b + j) = psi[i * 2 + j];
  return Ket(out);
}

Ket purify(const Mat& rho, int dim_a, int dim_b) {
  int d = dim_a * dim_b;
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("purify: shape mismatch");
  if (std::abs(rho.trace().real() - 1.0) > tol::decomposition ||
      std::abs(rho.trace().imag()) > tol::decomposition)
    throw std::invalid_argument("purify: trace is not 1");
  EigSystem es = eig_hermitian(rho);
  if (es.values.minCoeff() < -tol::decomposition)
    throw std::invalid_argument("purify: matrix is not positive semidefinite");

  // Keep eigenpairs carrying real weight; r of them become the ancilla
  // dimension glued onto the B side.
  std::vector<int> kept;
  for (int k = d - 1; k >= 0; --k)
    if (es.values(k) > 1e-12) kept.push_back(k);
  int r = static_cast<int>(kept.size());
  if (r == 0) throw std::invalid_argument("purify: matrix is numerically zero");

  CVec out = CVec::Zero(dim_a * dim_b * r);
  for (int k = 0; k < r; ++k) {
    double w = std::sqrt(es.values(kept[k]));
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_b; ++j)
        out(i * (dim_b * r) + j * r + k) = w * es.vectors(i * dim_b + j, kept[k]);
  }
  return Ket::normalized(out);
}

}  // namespace steercert
