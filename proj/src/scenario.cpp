#include "steercert/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace steercert {
namespace {

std::string fmt(const char* what, int i, int j, double mag) {
  std::ostringstream os;
  os << what << " at (" << i << ", " << j << "), magnitude " << mag;
  return os.str();
}

}  // namespace

std::vector<std::string> validate(const Assemblage& as, double tol) {
  std::vector<std::string> out;
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < 3; ++b) {
      const Mat& s = as.sigma[y][b];
      if (s.rows() != 2 || s.cols() != 2) {
        out.push_back(fmt("member has wrong shape", y, b, 0));
        return out;
      }
      if (!is_hermitian(s, tol)) out.push_back(fmt("member not hermitian", y, b, 0));
      else if (!is_psd(s, tol)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
        out.push_back(fmt("member not psd", y, b, -es.eigenvalues().minCoeff()));
      }
    }
  Mat reduced[3];
  for (int y = 0; y < 3; ++y) {
    reduced[y] = as.sigma[y][0] + as.sigma[y][1] + as.sigma[y][2];
    double tr = reduced[y].trace().real();
    if (std::abs(tr - 1.0) > tol)
      out.push_back(fmt("setting trace not 1", y, -1, std::abs(tr - 1.0)));
  }
  for (int y = 1; y < 3; ++y) {
    double gap = (reduced[y] - reduced[0]).cwiseAbs().maxCoeff();
    if (gap > tol) out.push_back(fmt("signaling between settings", 0, y, gap));
  }
  return out;
}

Assemblage assemblage_from(const Mat& rho, int dim_b, const MeasurementSet& bob) {
  if (bob.dim() != dim_b)
    throw std::invalid_argument("assemblage_from: measurement dimension mismatch");
  if (rho.rows() != 2 * dim_b || rho.cols() != 2 * dim_b)
    throw std::invalid_argument("assemblage_from: state shape mismatch");
  Mat id2 = Mat::Identity(2, 2);
  Assemblage as;
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < 3; ++b)
      as.sigma[y][b] =
          partial_trace_b(tensor(id2, bob.settings[y].elements[b]) * rho, 2, dim_b);
  return as;
}

Assemblage assemblage_from(const Ket& state, int dim_b, const MeasurementSet& bob) {
  return assemblage_from(state.projector(), dim_b, bob);
}

std::vector<std::string> JointDistribution::validate(double tol) const {
  std::vector<std::string> out;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      double sum = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double v = at(x, y, a, b);
          if (!(v >= -tol))
            out.push_back(fmt("negative probability in cell", x, y, -v));
          sum += v;
        }
      if (std::abs(sum - 1.0) > tol)
        out.push_back(fmt("cell not normalized", x, y, std::abs(sum - 1.0)));
    }
  // No signaling: Alice's marginal may not depend on y, Bob's not on x.
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      for (int y = 1; y < 3; ++y) {
        double m0 = 0, my = 0;
        for (int b = 0; b < 3; ++b) {
          m0 += at(x, 0, a, b);
          my += at(x, y, a, b);
        }
        if (std::abs(m0 - my) > tol)
          out.push_back(fmt("alice marginal signals", x, y, std::abs(m0 - my)));
      }
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < 3; ++b)
      for (int x = 1; x < 3; ++x) {
        double m0 = 0, mx = 0;
        for (int a = 0; a < 3; ++a) {
          m0 += at(0, y, a, b);
          mx += at(x, y, a, b);
        }
        if (std::abs(m0 - mx) > tol)
          out.push_back(fmt("bob marginal signals", x, y, std::abs(m0 - mx)));
      }
  return out;
}

JointDistribution distribution_from(const Mat& rho, int dim_b,
                                    const MeasurementSet& alice,
                                    const MeasurementSet& bob) {
  if (alice.dim() != 2)
    throw std::invalid_argument("distribution_from: alice side must be a qubit");
  if (bob.dim() != dim_b || rho.rows() != 2 * dim_b || rho.cols() != 2 * dim_b)
    throw std::invalid_argument("distribution_from: shape mismatch");
  JointDistribution d;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          d.at(x, y, a, b) =
              (tensor(alice.settings[x].elements[a], bob.settings[y].elements[b]) *
               rho)
                  .trace()
                  .real();
  return d;
}

JointDistribution distribution_from(const Ket& state, int dim_b,
                                    const MeasurementSet& alice,
                                    const MeasurementSet& bob) {
  return distribution_from(state.projector(), dim_b, alice, bob);
}

double steering_functional(const JointDistribution& d) {
  double hit = 0;
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a) hit += d.at(x, x, a, a);
  return 3.0 - hit;
}

double steering_functional(const Assemblage& as, const MeasurementSet& alice) {
  double hit = 0;
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      hit += (alice.settings[x].elements[a] * as.sigma[x][a]).trace().real();
  return 3.0 - hit;
}

std::vector<std::string> validate(const LhsModel& model, double tol) {
  std::vector<std::string> out;
  if (model.states.size() != model.weights.size() ||
      model.response.size() != model.weights.size()) {
    out.push_back("component counts disagree");
    return out;
  }
  if (model.weights.empty()) out.push_back("model is empty");
  double wsum = 0;
  for (int l = 0; l < model.size(); ++l) {
    if (!(model.weights[l] >= -tol))
      out.push_back(fmt("negative weight", l, -1, -model.weights[l]));
    wsum += model.weights[l];
    if (model.states[l].dim() != 2)
      out.push_back(fmt("hidden state not a qubit", l, -1, model.states[l].dim()));
    for (int y = 0; y < 3; ++y) {
      double rsum = 0;
      for (int b = 0; b < 3; ++b) {
        double v = model.response[l][y][b];
        if (!(v >= -tol)) out.push_back(fmt("negative response", l, y, -v));
        rsum += v;
      }
      if (std::abs(rsum - 1.0) > tol)
        out.push_back(fmt("response row not normalized", l, y, std::abs(rsum - 1.0)));
    }
  }
  if (!model.weights.empty() && std::abs(wsum - 1.0) > tol)
    out.push_back(fmt("weights do not sum to 1", -1, -1, std::abs(wsum - 1.0)));
  return out;
}

JointDistribution distribution_from_lhs(const LhsModel& model,
                                        const MeasurementSet& alice) {
  std::vector<std::string> bad = validate(model);
  if (!bad.empty())
    throw std::invalid_argument("distribution_from_lhs: invalid model: " + bad[0]);
  JointDistribution d;
  for (int l = 0; l < model.size(); ++l) {
    Mat rho = model.states[l].projector();
    double pa[3][3];
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 3; ++a)
        pa[x][a] = (alice.settings[x].elements[a] * rho).trace().real();
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            d.at(x, y, a, b) +=
                model.weights[l] * pa[x][a] * model.response[l][y][b];
  }
  return d;
}

std::vector<ShotRecord> sample_shots(const JointDistribution& d, std::size_t n,
                                     std::uint64_t seed) {
  std::vector<std::string> bad = d.validate(1e-9);
  if (!bad.empty())
    throw std::invalid_argument("sample_shots: invalid distribution: " + bad[0]);
  std::mt19937_64 rng(seed);
  std::vector<ShotRecord> shots;
  shots.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    int setting = static_cast<int>(uniform01(rng) * 9.0);
    int x = setting / 3, y = setting % 3;
    double norm = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) norm += d.at(x, y, a, b);
    double u = uniform01(rng) * norm;
    int a = 2, b = 2;  // fall-through target absorbs rounding slack
    double acc = 0;
    for (int k = 0; k < 9; ++k) {
      acc += d.at(x, y, k / 3, k % 3);
      if (u < acc) {
        a = k / 3;
        b = k % 3;
        break;
      }
    }
    shots.push_back({x, y, a, b});
  }
  return shots;
}

WEstimate estimate_w(const std::vector<ShotRecord>& shots) {
  std::array<std::size_t, 3> n{};
  std::array<std::size_t, 3> hits{};
  for (const ShotRecord& s : shots) {
    if (s.x != s.y) continue;
    ++n[s.x];
    if (s.a == s.b) ++hits[s.x];
  }
  WEstimate est{3.0, 0.0, n};
  double var = 0;
  for (int x = 0; x < 3; ++x) {
    if (n[x] == 0)
      throw std::invalid_argument(
          "estimate_w: no shots with matched settings for some x");
    double ph = static_cast<double>(hits[x]) / static_cast<double>(n[x]);
    est.w_hat -= ph;
    var += ph * (1.0 - ph) / static_cast<double>(n[x]);
  }
  est.std_error = std::sqrt(var);
  return est;
}

}  // namespace steercert
