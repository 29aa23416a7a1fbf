#include "steercert/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steercert/povm.hpp"

namespace steercert {
namespace {

constexpr double kEpsSlack = 1e-12;
constexpr double kEpsStateMax = 2.0 / 3.0;

MeasurementSet noisy_bob_impl(const std::array<std::array<double, 3>, 3>& eps) {
  MeasurementSet set;
  Mat id = Mat::Identity(2, 2);
  for (int x = 0; x < 3; ++x) {
    set.settings[x].dim = 2;
    for (int a = 0; a < 3; ++a) {
      double e = eps[x][a];
      if (e < -kEpsSlack || e > 1 + kEpsSlack)
        throw std::invalid_argument("noisy_bob: epsilon outside [0, 1]");
      set.settings[x].elements.push_back(
          (2.0 / 3.0) * ((1.0 - e) * bob_vector(a, x).projector() + (e / 2) * id));
    }
  }
  return set;
}

}  // namespace

double NoiseConfig::effective_epsilon() const {
  double worst = epsilon;
  if (per_element_epsilons)
    for (const auto& row : *per_element_epsilons)
      for (double e : row) worst = std::max(worst, e);
  return std::max(worst, epsilon_s.value_or(epsilon));
}

std::vector<std::string> NoiseConfig::validate() const {
  std::vector<std::string> out;
  if (epsilon < 0 || epsilon > 1) out.push_back("epsilon outside [0, 1]");
  double es = epsilon_s.value_or(epsilon);
  if (es < 0 || es > kEpsStateMax)
    out.push_back("epsilon_s outside [0, 2/3]");
  if (per_element_epsilons)
    for (const auto& row : *per_element_epsilons)
      for (double e : row)
        if (e < 0 || e > 1) {
          out.push_back("per-element epsilon outside [0, 1]");
          return out;
        }
  return out;
}

MeasurementSet noisy_bob(double epsilon) {
  std::array<std::array<double, 3>, 3> eps;
  for (auto& row : eps) row.fill(epsilon);
  return noisy_bob_impl(eps);
}

MeasurementSet noisy_bob(const std::array<std::array<double, 3>, 3>& eps) {
  return noisy_bob_impl(eps);
}

Ket imbalanced_ket(double delta) {
  CVec v = CVec::Zero(4);
  v(0) = 1.0;
  v(3) = 1.0 - delta;
  return Ket::normalized(v);
}

Mat noisy_state(double epsilon_s, double delta) {
  if (epsilon_s < -kEpsSlack)
    throw std::invalid_argument("noisy_state: epsilon_s must be nonnegative");
  Mat rho = (1.0 - 2.0 * epsilon_s) * imbalanced_ket(delta).projector() +
            (epsilon_s / 2.0) * Mat::Identity(4, 4);
  // The spectrum is {1 - 3 eps_s / 2, eps_s / 2 (x3)} for every delta; check
  // it numerically anyway so the error stays tied to the actual matrix.
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::construction)
    throw std::invalid_argument("noisy_state: not PSD (epsilon_s too large)");
  return rho;
}

double w_closed_form_epsilon(double epsilon) {
  if (epsilon < -kEpsSlack || epsilon > kEpsStateMax + kEpsSlack)
    throw std::invalid_argument("w_closed_form_epsilon: epsilon outside [0, 2/3]");
  return 3.0 - 3.0 * epsilon + 2.0 * epsilon * epsilon;
}

double diagonal_cell_epsilon(double epsilon) {
  if (epsilon < -kEpsSlack || epsilon > kEpsStateMax + kEpsSlack)
    throw std::invalid_argument("diagonal_cell_epsilon: epsilon outside [0, 2/3]");
  return epsilon * (3.0 - 2.0 * epsilon) / 9.0;
}

double f_closed_form(double delta, double epsilon) {
  if (epsilon < -kEpsSlack || epsilon > kEpsStateMax + kEpsSlack)
    throw std::invalid_argument("f_closed_form: epsilon outside [0, 2/3]");
  // The rational form is stated for the Bloch-scaled imbalance; our delta is
  // the amplitude deficit, a factor sqrt(2) larger.
  double d = delta / std::sqrt(2.0);
  double num = 3.0 * std::sqrt(2.0) * d * (3.0 - 2.0 * epsilon) * epsilon +
               3.0 * epsilon * (-3.0 + 2.0 * epsilon) +
               d * d * (-2.0 + epsilon) * (1.0 + 2.0 * epsilon);
  double den = -3.0 + 3.0 * (std::sqrt(2.0) - d) * d;
  if (std::abs(den) < 1e-9)
    throw std::domain_error("f_closed_form: denominator vanishes");
  return num / den;
}

double w_closed_form_delta(double delta, double epsilon) {
  return 3.0 - f_closed_form(delta, epsilon);
}

double epsilon_crossing(double beta) {
  // Solve 3 - 3 eps + 2 eps^2 = beta for the smaller root.
  double disc = 9.0 - 8.0 * (3.0 - beta);
  if (disc < 0 || beta > 3.0)
    throw std::invalid_argument("epsilon_crossing: no crossing for this beta");
  double eps = (3.0 - std::sqrt(disc)) / 4.0;
  if (eps < 0 || eps > kEpsStateMax)
    throw std::invalid_argument("epsilon_crossing: crossing outside [0, 2/3]");
  return eps;
}

std::vector<SweepRow> sweep(const std::vector<double>& deltas,
                            const std::vector<double>& epsilons, bool parallel) {
  const long nd = static_cast<long>(deltas.size());
  const long ne = static_cast<long>(epsilons.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(nd * ne));
  MeasurementSet alice = alice_ideal();

  auto fill_row = [&](long idx) {
    double delta = deltas[static_cast<std::size_t>(idx / ne)];
    double requested = epsilons[static_cast<std::size_t>(idx % ne)];
    double eps = std::clamp(requested, 0.0, kEpsStateMax);
    SweepRow row;
    row.delta = delta;
    row.epsilon = eps;
    row.clipped = eps != requested;
    row.w_closed = w_closed_form_delta(delta, eps);
    JointDistribution d =
        distribution_from(noisy_state(eps, delta), 2, alice, noisy_bob(eps));
    row.w_sim = steering_functional(d);
    row.discrepancy = std::abs(row.w_closed - row.w_sim);
    rows[static_cast<std::size_t>(idx)] = row;
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < nd * ne; ++idx) fill_row(idx);
  } else {
    for (long idx = 0; idx < nd * ne; ++idx) fill_row(idx);
  }
  return rows;
}

}  // namespace steercert
