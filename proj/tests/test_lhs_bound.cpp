#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "steercert/lhs_bound.hpp"
#include "support.hpp"

using namespace steercert;
using steercert::testing::random_density;
using steercert::testing::random_unitary;

namespace {

constexpr double kBetaRecipe = 2.6726039399558577;
constexpr double kBetaUnrestricted = 2.7980567236571092;

// Born objective evaluated on an arbitrary density matrix, used to confirm
// that mixtures never undercut the pure-state search.
double mixed_objective(const Mat& rho, const MeasurementSet& alice) {
  double total = 0;
  for (int x = 0; x < 3; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a)
      best = std::min(best, (alice.settings[x].elements[a] * rho).trace().real());
    total += best;
  }
  return total;
}

}  // namespace

TEST_CASE("objective worked values on the poles") {
  MeasurementSet alice = alice_ideal();

  // |0>: per-setting minima 1/6, 0, 1/3
  BlochPoint north{0.0, 0.0};
  CHECK(lhs_objective(north, alice) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(overlap_objective(north, alice) == doctest::Approx(0.75).epsilon(1e-14));

  // |1>: setting 0 now has minimum 0 (first trine vector is |0>),
  // setting 1 minimum 1/6, setting 2 equatorial still 1/3
  BlochPoint south{std::numbers::pi, 0.0};
  CHECK(lhs_objective(south, alice) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("optimizer reproduces both bound conventions") {
  BoundResult r = optimize_bound(alice_ideal());

  CHECK(std::abs(r.beta_L - kBetaRecipe) < 1e-9);
  CHECK(std::abs(r.beta_unrestricted - kBetaUnrestricted) < 1e-9);

  // closed form for the unrestricted value
  double closed = 2.0 + std::sqrt(4.0 + std::sqrt(3.0)) / 3.0;
  CHECK(std::abs(r.beta_unrestricted - closed) < 1e-12);

  // bound-objective consistency, both conventions
  CHECK(r.beta_L == doctest::Approx(3.0 - r.objective_at_argmin).epsilon(1e-12));
  CHECK(r.beta_unrestricted ==
        doctest::Approx(3.0 - r.objective_unrestricted).epsilon(1e-12));

  // the argmin actually evaluates to the reported objective
  CHECK(overlap_objective(r.argmin, alice_ideal()) ==
        doctest::Approx(r.objective_at_argmin).epsilon(1e-10));
  CHECK(lhs_objective(r.argmin_unrestricted, alice_ideal()) ==
        doctest::Approx(r.objective_unrestricted).epsilon(1e-10));

  // both bounds sit strictly between the trivial 2 and the quantum 3
  CHECK(r.beta_L > 2.0);
  CHECK(r.beta_L < 3.0);
  CHECK(r.beta_unrestricted > r.beta_L);
}

TEST_CASE("strategy route agrees with the grid-plus-simplex route") {
  StrategyCheck chk = strategy_cross_check(alice_ideal());
  CHECK(std::abs(chk.beta_recipe - kBetaRecipe) < 1e-12);
  CHECK(std::abs(chk.beta_unrestricted - kBetaUnrestricted) < 1e-12);
  CHECK(chk.best_strategy[0] == 0);
  CHECK(chk.best_strategy[1] == 1);
  CHECK(chk.best_strategy[2] == 0);

  BoundResult r = optimize_bound(alice_ideal());
  CHECK(std::abs(chk.beta_recipe - r.beta_L) < 2e-3);  // the documented gate
  CHECK(std::abs(chk.beta_recipe - r.beta_L) < 1e-9);  // actual agreement
  CHECK(std::abs(chk.beta_unrestricted - r.beta_unrestricted) < 1e-9);
}

TEST_CASE("parallel and serial grid scans are bit-identical") {
  MeasurementSet alice = alice_ideal();
  for (const Domain& dom : {Domain::quarter_sphere(), Domain::full_sphere()}) {
    std::vector<GridCell> par = scan_objective_grid(alice, dom, 101, 7, true);
    std::vector<GridCell> ser = scan_objective_grid(alice, dom, 101, 7, false);
    REQUIRE(par.size() == 7);
    REQUIRE(ser.size() == 7);
    for (int i = 0; i < 7; ++i) {
      CHECK(par[i].value == ser[i].value);
      CHECK(par[i].point.theta == ser[i].point.theta);
      CHECK(par[i].point.phi == ser[i].point.phi);
    }
    for (int i = 1; i < 7; ++i) CHECK(par[i].value >= par[i - 1].value);
  }
}

TEST_CASE("bloch kernel matches the complex-arithmetic reference scan") {
  MeasurementSet alice = alice_ideal();
  for (const Domain& dom : {Domain::quarter_sphere(), Domain::full_sphere()}) {
    GridCell fast = scan_objective_grid(alice, dom, 64, 1, true)[0];
    GridCell ref = scan_objective_grid_reference(alice, dom, 64);
    CHECK(std::abs(fast.value - ref.value) < 1e-13);
    // the argmin cell may legitimately differ between the two arithmetic
    // paths when the objective has symmetric minima; what must agree is the
    // value each reported point evaluates to
    CHECK(std::abs(lhs_objective(fast.point, alice) - lhs_objective(ref.point, alice)) <
          1e-13);
  }
}

TEST_CASE("dense reduced-domain grid never undercuts the frozen overlap level") {
  // every overlap-convention objective value on a 500 x 500 reduced-domain
  // grid stays above 3 - 2.674
  GridCell best = scan_objective_grid(alice_ideal(), Domain::quarter_sphere(), 500, 1, true)[0];
  CHECK(1.5 * best.value >= 3.0 - 2.674);
}

TEST_CASE("grid refinement is monotone on nested grids") {
  MeasurementSet alice = alice_ideal();
  Domain dom = Domain::quarter_sphere();
  // 401 - 1 is a multiple of 101 - 1, so the coarse grid is a subset
  double coarse = scan_objective_grid(alice, dom, 101, 1, true)[0].value;
  double fine = scan_objective_grid(alice, dom, 401, 1, true)[0].value;
  CHECK(fine <= coarse + 1e-15);
}

TEST_CASE("objective is lipschitz in the angles with constant at most 2") {
  std::mt19937_64 rng(51);
  MeasurementSet alice = alice_ideal();
  for (int trial = 0; trial < 300; ++trial) {
    BlochPoint p{std::numbers::pi * uniform01(rng),
                 2.0 * std::numbers::pi * uniform01(rng)};
    double dt = (uniform01(rng) - 0.5) * 0.02;
    double dp = (uniform01(rng) - 0.5) * 0.02;
    BlochPoint q{p.theta + dt, p.phi + dp};
    double dist = std::sqrt(dt * dt + dp * dp);
    double gap = std::abs(lhs_objective(p, alice) - lhs_objective(q, alice));
    CHECK(gap <= 2.0 * dist + 1e-12);
  }
}

TEST_CASE("degenerate set with three equal settings pushes the bound to 3") {
  MeasurementSet degenerate = alice_ideal();
  degenerate.settings[1] = degenerate.settings[0];
  degenerate.settings[2] = degenerate.settings[0];

  // a hidden state orthogonal to one trine vector zeroes all three settings
  StrategyCheck chk = strategy_cross_check(degenerate);
  CHECK(std::abs(chk.beta_unrestricted - 3.0) < 1e-12);

  BoundResult r = optimize_bound(degenerate);
  CHECK(r.beta_unrestricted > 3.0 - 1e-6);
  CHECK(r.beta_unrestricted <= 3.0 + 1e-12);
}

TEST_CASE("unrestricted bound is invariant under unitary conjugation") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    Mat u = random_unitary(2, rng);
    MeasurementSet rotated = conjugated(alice_ideal(), u);

    // exact route: eigenvalues of the strategy operators are invariant
    StrategyCheck chk = strategy_cross_check(rotated);
    CHECK(std::abs(chk.beta_unrestricted - kBetaUnrestricted) < 1e-12);
  }
  // optimizer route on a single rotation, within refinement tolerance
  Mat u = random_unitary(2, rng);
  BoundResult r = optimize_bound(conjugated(alice_ideal(), u));
  CHECK(std::abs(r.beta_unrestricted - kBetaUnrestricted) < 1e-8);
}

TEST_CASE("mixed hidden states never undercut the pure-state minimum") {
  std::mt19937_64 rng(53);
  BoundResult r = optimize_bound(alice_ideal());
  for (int trial = 0; trial < 50; ++trial) {
    Mat rho = random_density(2, rng);
    CHECK(mixed_objective(rho, alice_ideal()) >= r.objective_unrestricted - 1e-9);
  }
}

TEST_CASE("optimizer output is identical with parallelism on and off") {
  OptimizerConfig par, ser;
  ser.parallel = false;
  BoundResult a = optimize_bound(alice_ideal(), par);
  BoundResult b = optimize_bound(alice_ideal(), ser);
  CHECK(a.beta_L == b.beta_L);
  CHECK(a.beta_unrestricted == b.beta_unrestricted);
  CHECK(a.argmin.theta == b.argmin.theta);
  CHECK(a.argmin.phi == b.argmin.phi);
  CHECK(a.argmin_unrestricted.theta == b.argmin_unrestricted.theta);
  CHECK(a.argmin_unrestricted.phi == b.argmin_unrestricted.phi);
  CHECK(a.refinement_iterations == b.refinement_iterations);
}

TEST_CASE("coarser configurations still converge") {
  OptimizerConfig small;
  small.grid = 64;
  small.refine_starts = 1;
  BoundResult r = optimize_bound(alice_ideal(), small);
  CHECK(std::abs(r.beta_L - kBetaRecipe) < 1e-6);
  CHECK(std::abs(r.beta_unrestricted - kBetaUnrestricted) < 1e-6);
  CHECK(r.grid_resolution == 64);
  CHECK(r.refinement_iterations > 0);
}

TEST_CASE("attaining model realizes the unrestricted bound as a physical model") {
  MeasurementSet alice = alice_ideal();
  LhsModel model = attaining_model(alice);
  REQUIRE(validate(model).empty());
  JointDistribution d = distribution_from_lhs(model, alice);
  CHECK(d.validate().empty());
  CHECK(std::abs(steering_functional(d) - kBetaUnrestricted) < 1e-12);
}

TEST_CASE("bloch point geometry") {
  BlochPoint equator{std::numbers::pi / 2.0, std::numbers::pi / 2.0};
  Ket k = equator.ket();
  CHECK(std::abs(k[0] - Complex(std::sqrt(0.5), 0)) < 1e-14);
  CHECK(std::abs(k[1] - Complex(0, std::sqrt(0.5))) < 1e-14);

  auto dir = equator.direction();
  CHECK(std::abs(dir[0]) < 1e-14);
  CHECK(dir[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(dir[2]) < 1e-14);

  // direction is the projector's bloch vector
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    BlochPoint p{std::numbers::pi * uniform01(rng),
                 2.0 * std::numbers::pi * uniform01(rng)};
    auto d = p.direction();
    Mat proj = p.ket().projector();
    CHECK(std::abs(d[0] - 2.0 * proj(0, 1).real()) < 1e-13);
    CHECK(std::abs(d[1] + 2.0 * proj(0, 1).imag()) < 1e-13);
    CHECK(std::abs(d[2] - (proj(0, 0).real() - proj(1, 1).real())) < 1e-13);
  }
}

TEST_CASE("domain presets cover the advertised ranges") {
  Domain q = Domain::quarter_sphere();
  CHECK(q.theta_max == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(q.phi_max == doctest::Approx(std::numbers::pi));
  Domain f = Domain::full_sphere();
  CHECK(f.theta_max == doctest::Approx(std::numbers::pi));
  CHECK(f.phi_max == doctest::Approx(2.0 * std::numbers::pi));
}
