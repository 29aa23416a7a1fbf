#include "steercert/povm.hpp"

#include <cmath>
#include <stdexcept>

namespace steercert {
namespace {

constexpr double kRankThreshold = 1e-9;

int matrix_rank(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankThreshold) ++rank;
  return rank;
}

}  // namespace

std::vector<PovmViolation> validate(const Povm& p) {
  std::vector<PovmViolation> out;
  if (p.dim <= 0 || p.elements.empty()) {
    out.push_back({-1, "shape", 0.0});
    return out;
  }
  bool shapes_ok = true;
  for (int i = 0; i < p.outcomes(); ++i) {
    const Mat& n = p.elements[i];
    if (n.rows() != p.dim || n.cols() != p.dim) {
      out.push_back({i, "shape", 0.0});
      shapes_ok = false;
      continue;
    }
    if (!n.allFinite()) {
      out.push_back({i, "finite", 0.0});
      shapes_ok = false;
      continue;
    }
    double herm = (n - n.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::construction) {
      out.push_back({i, "hermitian", herm});
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(n, Eigen::EigenvaluesOnly);
    double low = es.eigenvalues().minCoeff();
    if (low < -tol::construction) out.push_back({i, "psd", -low});
  }
  if (shapes_ok) {
    Mat sum = Mat::Zero(p.dim, p.dim);
    for (const Mat& n : p.elements) sum += n;
    double defect = (sum - Mat::Identity(p.dim, p.dim)).cwiseAbs().maxCoeff();
    if (defect > tol::construction) out.push_back({-1, "complete", defect});
  }
  return out;
}

std::vector<MeasurementViolation> validate(const MeasurementSet& set) {
  std::vector<MeasurementViolation> out;
  for (int x = 0; x < 3; ++x) {
    if (set.settings[x].dim != set.settings[0].dim)
      out.push_back({x, {-1, "dimension", double(set.settings[x].dim)}});
    if (set.settings[x].outcomes() != 3)
      out.push_back({x, {-1, "outcomes", double(set.settings[x].outcomes())}});
    for (const PovmViolation& v : validate(set.settings[x]))
      out.push_back({x, v});
  }
  return out;
}

Ket alice_vector(int a, int x) {
  if (a < 0 || a > 2 || x < 0 || x > 2)
    throw std::invalid_argument("alice_vector: indices must be in 0..2");
  const double h = std::sqrt(3.0) / 2.0;
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  CVec v(2);
  // Three trine triples, one per setting. Setting 0 is real (xz great
  // circle), setting 1 swaps the roles of the basis states (yz circle),
  // setting 2 lives on the equator (xy circle).
  switch (x * 3 + a) {
    case 0: v << 1.0, 0.0; break;
    case 1: v << 0.5, h; break;
    case 2: v << 0.5, -h; break;
    case 3: v << 0.0, 1.0; break;
    case 4: v << h, 0.5 * i; break;
    case 5: v << h, -0.5 * i; break;
    case 6: v << r, r * i; break;
    case 7: v << r, r * Complex(-h, -0.5); break;
    case 8: v << r, r * Complex(h, -0.5); break;
  }
  return Ket(v);
}

Ket bob_vector(int a, int x) {
  // The state orthogonal to conj(e_{a,x}); equivalently the unique f with
  // sum_i e_i f_i = 0, which is the pairing the maximally entangled state
  // turns into a vanishing joint probability.
  return orthogonal_qubit(alice_vector(a, x).conjugated());
}

namespace {

MeasurementSet trine_set(Ket (*vec)(int, int)) {
  MeasurementSet set;
  for (int x = 0; x < 3; ++x) {
    set.settings[x].dim = 2;
    for (int a = 0; a < 3; ++a)
      set.settings[x].elements.push_back((2.0 / 3.0) * vec(a, x).projector());
  }
  return set;
}

}  // namespace

MeasurementSet alice_ideal() { return trine_set(&alice_vector); }
MeasurementSet bob_ideal() { return trine_set(&bob_vector); }

ExtremalityReport check_extremality(const Povm& p) {
  ExtremalityReport report;
  report.applicable = true;
  std::vector<int> nonzero;
  for (int i = 0; i < p.outcomes(); ++i) {
    int rank = matrix_rank(p.elements[i]);
    report.element_ranks.push_back(rank);
    if (rank > 1) report.applicable = false;
    if (rank >= 1) nonzero.push_back(i);
  }
  // Operator span of the nonzero elements: flatten each to a dim^2 column.
  Mat flat(p.dim * p.dim, static_cast<Eigen::Index>(nonzero.size()));
  for (std::size_t k = 0; k < nonzero.size(); ++k) {
    const Mat& n = p.elements[nonzero[k]];
    flat.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const CVec>(n.data(), n.size());
  }
  report.span_dimension = nonzero.empty() ? 0 : matrix_rank(flat);
  report.extremal =
      report.applicable && report.span_dimension == static_cast<int>(nonzero.size());
  return report;
}

Povm project_povm(const Povm& p, const Mat& projector) {
  if (projector.rows() != p.dim || projector.cols() != p.dim)
    throw std::invalid_argument("project_povm: projector shape mismatch");
  if (!is_hermitian(projector, tol::decomposition) ||
      (projector * projector - projector).cwiseAbs().maxCoeff() > tol::decomposition)
    throw std::invalid_argument("project_povm: matrix is not an orthogonal projector");

  // Deterministic basis for the range: two-pass Gram-Schmidt over the
  // projector's columns in index order. On axis-aligned projectors this
  // reproduces the standard basis vectors exactly.
  std::vector<CVec> basis;
  for (int j = 0; j < p.dim; ++j) {
    CVec v = projector.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& b : basis) v -= b.dot(v) * b;
    double n = v.norm();
    if (n > 1e-9) basis.push_back(canonical_phase(v / n));
  }
  int r = static_cast<int>(basis.size());
  if (std::abs(projector.trace().real() - r) > 0.5)
    throw std::runtime_error("project_povm: rank detection failed");

  Mat v(p.dim, r);
  for (int k = 0; k < r; ++k) v.col(k) = basis[k];
  Povm out;
  out.dim = r;
  for (const Mat& n : p.elements) out.elements.push_back(v.adjoint() * n * v);
  return out;
}

Povm conjugated(const Povm& p, const Mat& u) {
  if (u.rows() != p.dim || u.cols() != p.dim)
    throw std::invalid_argument("conjugated: unitary shape mismatch");
  if (!is_unitary(u, tol::decomposition))
    throw std::invalid_argument("conjugated: matrix is not unitary");
  Povm out;
  out.dim = p.dim;
  for (const Mat& n : p.elements) out.elements.push_back(u * n * u.adjoint());
  return out;
}

MeasurementSet conjugated(const MeasurementSet& set, const Mat& u) {
  MeasurementSet out;
  for (int x = 0; x < 3; ++x) out.settings[x] = conjugated(set.settings[x], u);
  return out;
}

Povm extend_with_identity(const Povm& p, int factor) {
  if (factor < 1) throw std::invalid_argument("extend_with_identity: factor < 1");
  Povm out;
  out.dim = p.dim * factor;
  Mat id = Mat::Identity(factor, factor);
  for (const Mat& n : p.elements) out.elements.push_back(tensor(n, id));
  return out;
}

MeasurementSet extend_with_identity(const MeasurementSet& set, int factor) {
  MeasurementSet out;
  for (int x = 0; x < 3; ++x)
    out.settings[x] = extend_with_identity(set.settings[x], factor);
  return out;
}

}  // namespace steercert
