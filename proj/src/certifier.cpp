#include "steercert/certifier.hpp"

#include <cmath>
#include <cstdio>

namespace steercert {
namespace {

// Extends a set of orthonormal columns to a full orthonormal basis of C^dim.
// Pivoted Gram-Schmidt over the standard basis: each round admits the
// standard vector with the largest residual, so the completion is
// deterministic and well conditioned.
std::vector<CVec> complete_basis(std::vector<CVec> base, int dim) {
  while (static_cast<int>(base.size()) < dim) {
    double best_norm = -1;
    CVec best;
    for (int j = 0; j < dim; ++j) {
      CVec v = CVec::Zero(dim);
      v(j) = 1;
      for (int pass = 0; pass < 2; ++pass)
        for (const CVec& b : base) v -= b.dot(v) * b;
      double n = v.norm();
      if (n > best_norm) {
        best_norm = n;
        best = v;
      }
    }
    base.push_back(canonical_phase(best / best_norm));
  }
  return base;
}

std::string cell_name(const char* what, int a, int x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s[a=%d,x=%d]", what, a, x);
  return buf;
}

}  // namespace

CertificationInput::CertificationInput(Ket s, int d, MeasurementSet b)
    : state(std::move(s)), dim_b(d), bob(std::move(b)) {
  if (dim_b < 2)
    throw std::invalid_argument("CertificationInput: dim_b must be at least 2");
  if (state.dim() != 2 * dim_b)
    throw std::invalid_argument("CertificationInput: state dimension is not 2 * dim_b");
  if (bob.dim() != dim_b)
    throw std::invalid_argument("CertificationInput: measurement dimension mismatch");
  std::vector<MeasurementViolation> bad = validate(bob);
  if (!bad.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "CertificationInput: invalid measurements (setting %d, element %d, %s)",
                  bad[0].setting, bad[0].violation.element,
                  bad[0].violation.check.c_str());
    throw std::invalid_argument(buf);
  }
}

double check_max_violation_conditions(const CertificationInput& input) {
  JointDistribution d =
      distribution_from(input.state, input.dim_b, alice_ideal(), input.bob);
  double worst = 0;
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) worst = std::max(worst, d.at(x, x, a, a));
  return worst;
}

ExtractedFrame extract_unitary(const CertificationInput& input) {
  int d = input.dim_b;
  SchmidtForm sf = schmidt_decompose(input.state, 2, d);
  if (sf.rank() < 2)
    throw NotEntangledError(
        "extract_unitary: state has Schmidt rank 1 across the A|B cut");

  CVec s0 = sf.left[0].amplitudes(), s1 = sf.left[1].amplitudes();
  CVec t0 = sf.right[0].amplitudes(), t1 = sf.right[1].amplitudes();
  t1 -= t0.dot(t1) * t0;  // tidy orthonormality against factorization rounding
  t1.normalize();

  // A degenerate Schmidt spectrum leaves the frame free up to a unitary on
  // the support. Pin it by diagonalizing the first measurement element whose
  // restriction to the support has a spectral gap; for a split spectrum the
  // eigendecomposition already fixed the frame and rotating would break it.
  if (std::abs(sf.coefficients[0] - sf.coefficients[1]) <= 1e-6) {
    Mat tb(d, 2);
    tb.col(0) = t0;
    tb.col(1) = t1;
    for (int y = 0; y < 3; ++y) {
      bool pinned = false;
      for (int b = 0; b < 3; ++b) {
        Mat a2 = tb.adjoint() * input.bob.settings[y].elements[b] * tb;
        a2 = 0.5 * (a2 + a2.adjoint().eval());
        EigSystem es = eig_hermitian(a2);
        if (es.values(1) - es.values(0) > 1e-9) {
          Mat sb(2, 2);
          sb.col(0) = s0;
          sb.col(1) = s1;
          // t -> t V keeps the state invariant iff s -> s conj(V).
          Mat tnew = tb * es.vectors;
          Mat snew = sb * es.vectors.conjugate();
          t0 = tnew.col(0);
          t1 = tnew.col(1);
          s0 = snew.col(0);
          s1 = snew.col(1);
          pinned = true;
          break;
        }
      }
      if (pinned) break;
    }
  }

  // Phase pin: canonical phase on each t, compensated on the partner s.
  for (CVec* pair : {&t0, &t1}) {
    CVec& t = *pair;
    CVec& s = (pair == &t0) ? s0 : s1;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      double mag = std::abs(t(j));
      if (mag > tol::construction) {
        Complex alpha = std::conj(t(j)) / mag;
        t *= alpha;
        s *= std::conj(alpha);
        break;
      }
    }
  }

  // Rotation: Schmidt support {t_i} goes onto the embedded conjugate Schmidt
  // basis of the A side; the orthogonal complement is completed
  // deterministically on both sides.
  CVec g0 = CVec::Zero(d), g1 = CVec::Zero(d);
  g0.head(2) = s0.conjugate();
  g1.head(2) = s1.conjugate();
  g1 -= g0.dot(g1) * g0;
  g1.normalize();
  std::vector<CVec> source = complete_basis({t0, t1}, d);
  std::vector<CVec> target = complete_basis({g0, g1}, d);
  Mat u = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) u += target[k] * source[k].adjoint();

  ExtractedFrame frame;
  frame.u_b = u;
  frame.p_b = std::sqrt(2.0) *
              (sf.coefficients[0] * (s0.conjugate() * s0.conjugate().adjoint()) +
               sf.coefficients[1] * (s1.conjugate() * s1.conjugate().adjoint()));
  frame.pi_b = t0 * t0.adjoint() + t1 * t1.adjoint();
  frame.schmidt.coefficients = sf.coefficients;
  frame.schmidt.left = {Ket::normalized(s0), Ket::normalized(s1)};
  frame.schmidt.right = {Ket::normalized(t0), Ket::normalized(t1)};
  return frame;
}

CertificationReport certify(const CertificationInput& input, double tolerance) {
  if (!(tolerance > 0))
    throw std::invalid_argument("certify: tolerance must be positive");
  CertificationReport r{};
  r.tolerance = tolerance;
  r.max_diagonal_probability = check_max_violation_conditions(input);
  ExtractedFrame frame = extract_unitary(input);
  r.extracted_unitary = frame.u_b;

  CVec rotated = tensor(Mat::Identity(2, 2), frame.u_b) * input.state.amplitudes();
  r.state_fidelity =
      std::norm(embed_bob(phi_plus(), input.dim_b).amplitudes().dot(rotated));

  MeasurementSet ideal = bob_ideal();
  double dev = 0;
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < 3; ++b) {
      Mat rotated_el = frame.u_b *
                       (frame.pi_b * input.bob.settings[y].elements[b] * frame.pi_b) *
                       frame.u_b.adjoint();
      Mat embedded_ideal = Mat::Zero(input.dim_b, input.dim_b);
      embedded_ideal.topLeftCorner(2, 2) = ideal.settings[y].elements[b];
      dev = std::max(dev, operator_norm(rotated_el - embedded_ideal));
    }
  r.measurement_deviation = dev;
  r.p_b_identity_deviation = operator_norm(frame.p_b - Mat::Identity(2, 2));
  r.passed = r.max_diagonal_probability <= tolerance &&
             1.0 - r.state_fidelity <= tolerance &&
             r.measurement_deviation <= tolerance;
  return r;
}

std::vector<IdentityResidual> verify_identity_chain(const CertificationInput& input) {
  double worst = check_max_violation_conditions(input);
  if (worst > 1e-3)
    throw std::invalid_argument(
        "verify_identity_chain: input is far from maximal violation; "
        "the chain presumes near-zero diagonal probabilities");
  ExtractedFrame frame = extract_unitary(input);

  // Everything below lives on the rotated two-dimensional support block.
  Mat p = frame.p_b;
  Mat k[3][3];  // k[x][a] = P ntilde P for the same-setting pairing
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) {
      Mat full = frame.u_b *
                 (frame.pi_b * input.bob.settings[x].elements[a] * frame.pi_b) *
                 frame.u_b.adjoint();
      Mat ntilde = full.topLeftCorner(2, 2);
      k[x][a] = p * ntilde * p;
    }

  std::vector<IdentityResidual> out;
  MeasurementSet alice = alice_ideal();

  // Direct orthogonality: the transformed element is trace-orthogonal to the
  // transpose of Alice's matching element because p(a, a | x, x) = 0.
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) {
      Mat mt = alice.settings[x].elements[a].transpose();
      out.push_back({cell_name("trace_orthogonality", a, x),
                     std::abs((k[x][a] * mt).trace())});
    }

  // Same statement through the eigensystem of K: all weight of K must avoid
  // the conjugated measurement direction.
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) {
      EigSystem es = eig_hermitian(0.5 * (k[x][a] + k[x][a].adjoint().eval()));
      CVec estar = alice_vector(a, x).conjugated().amplitudes();
      double overlap = 0;
      for (int i = 0; i < 2; ++i)
        overlap += es.values(i) * std::norm(es.vectors.col(i).dot(estar));
      out.push_back({cell_name("eigenbasis_orthogonality", a, x), std::abs(overlap)});
    }

  // K is PSD and orthogonal to one direction of a qubit, so it must be rank
  // one along the complementary direction.
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) {
      EigSystem es = eig_hermitian(0.5 * (k[x][a] + k[x][a].adjoint().eval()));
      out.push_back({cell_name("rank_one_deviation", a, x), std::abs(es.values(0))});
    }

  // Explicit form: K = beta |f><f| with f the ideal complement vector and
  // beta = Tr K.
  double beta[3][3];
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) {
      beta[x][a] = k[x][a].trace().real();
      Mat model = beta[x][a] * bob_vector(a, x).projector();
      out.push_back(
          {cell_name("projector_match", a, x), operator_norm(k[x][a] - model)});
    }
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      out.push_back(
          {cell_name("beta_cell", a, x), std::abs(beta[x][a] - 2.0 / 3.0)});

  // Summing K over outcomes collapses the measurement to the projected
  // identity, leaving P^2.
  Mat p2 = p * p;
  for (int x = 0; x < 3; ++x) {
    Mat sum = k[x][0] + k[x][1] + k[x][2];
    char buf[32];
    std::snprintf(buf, sizeof buf, "completeness_sum[x=%d]", x);
    out.push_back({buf, operator_norm(sum - p2)});
  }

  double beta_gap = 0;
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      beta_gap = std::max(beta_gap, std::abs(beta[x][a] - beta[0][0]));
  out.push_back({"beta_uniformity", beta_gap});
  out.push_back({"p_squared_identity",
                 operator_norm(p2 - (1.5 * beta[0][0]) * Mat::Identity(2, 2))});
  return out;
}

}  // namespace steercert
