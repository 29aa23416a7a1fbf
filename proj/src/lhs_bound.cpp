#include "steercert/lhs_bound.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace steercert {
namespace {

struct Vec3 {
  double x, y, z;
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

// Bloch form of a 2x2 Hermitian operator: Tr(M rho_m) = c + r . m for a pure
// state with Bloch direction m.
struct BlochOp {
  double c;
  Vec3 r;
};

BlochOp bloch_form(const Mat& m) {
  return {0.5 * (m(0, 0).real() + m(1, 1).real()),
          {m(0, 1).real(), -m(0, 1).imag(),
           0.5 * (m(0, 0).real() - m(1, 1).real())}};
}

// Precomputed coefficients for the nine elements of a qubit measurement set.
struct Kernel {
  BlochOp op[3][3];  // [setting][outcome]
};

Kernel make_kernel(const MeasurementSet& alice) {
  if (alice.dim() != 2)
    throw std::invalid_argument("lhs bound: measurements must act on a qubit");
  Kernel k;
  for (int x = 0; x < 3; ++x) {
    if (alice.settings[x].outcomes() != 3)
      throw std::invalid_argument("lhs bound: need three outcomes per setting");
    for (int a = 0; a < 3; ++a)
      k.op[x][a] = bloch_form(alice.settings[x].elements[a]);
  }
  return k;
}

inline double born_eval(const Kernel& k, const Vec3& m) {
  double total = 0;
  for (int x = 0; x < 3; ++x) {
    double best = k.op[x][0].c + dot(k.op[x][0].r, m);
    for (int a = 1; a < 3; ++a)
      best = std::min(best, k.op[x][a].c + dot(k.op[x][a].r, m));
    total += best;
  }
  return total;
}

inline Vec3 direction_of(double theta, double phi) {
  double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

struct Candidate {
  double value;
  long index;
};

inline bool better(const Candidate& a, const Candidate& b) {
  return a.value < b.value || (a.value == b.value && a.index < b.index);
}

// Keeps the k best candidates in ascending (value, index) order.
void insert_candidate(std::vector<Candidate>& best, std::size_t k, Candidate c) {
  auto pos = std::lower_bound(best.begin(), best.end(), c, better);
  if (pos == best.end() && best.size() >= k) return;
  best.insert(pos, c);
  if (best.size() > k) best.pop_back();
}

// Two-dimensional Nelder-Mead. Plain textbook variant; the objectives here
// are cheap piecewise-smooth functions of two angles and the simplex starts
// one grid cell wide, so nothing fancier is warranted.
double nelder_mead(const std::function<double(double, double)>& f, double t0,
                   double p0, double step, int max_iter, double tol,
                   long& iterations, double& arg_t, double& arg_p) {
  struct Vertex {
    double t, p, val;
  };
  std::array<Vertex, 3> v{{{t0, p0, f(t0, p0)},
                           {t0 + step, p0, f(t0 + step, p0)},
                           {t0, p0 + step, f(t0, p0 + step)}}};
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.val < b.val; };
  for (int it = 0; it < max_iter; ++it) {
    std::sort(v.begin(), v.end(), by_value);
    double diameter =
        std::max({std::hypot(v[0].t - v[1].t, v[0].p - v[1].p),
                  std::hypot(v[0].t - v[2].t, v[0].p - v[2].p),
                  std::hypot(v[1].t - v[2].t, v[1].p - v[2].p)});
    if (diameter < tol) break;
    ++iterations;
    double ct = 0.5 * (v[0].t + v[1].t), cp = 0.5 * (v[0].p + v[1].p);
    Vertex refl{ct + (ct - v[2].t), cp + (cp - v[2].p), 0};
    refl.val = f(refl.t, refl.p);
    if (refl.val < v[0].val) {
      Vertex expand{ct + 2 * (ct - v[2].t), cp + 2 * (cp - v[2].p), 0};
      expand.val = f(expand.t, expand.p);
      v[2] = expand.val < refl.val ? expand : refl;
    } else if (refl.val < v[1].val) {
      v[2] = refl;
    } else {
      Vertex contract{ct + 0.5 * (v[2].t - ct), cp + 0.5 * (v[2].p - cp), 0};
      contract.val = f(contract.t, contract.p);
      if (contract.val < v[2].val) {
        v[2] = contract;
      } else {
        for (int i = 1; i < 3; ++i) {
          v[i].t = v[0].t + 0.5 * (v[i].t - v[0].t);
          v[i].p = v[0].p + 0.5 * (v[i].p - v[0].p);
          v[i].val = f(v[i].t, v[i].p);
        }
      }
    }
  }
  std::sort(v.begin(), v.end(), by_value);
  arg_t = v[0].t;
  arg_p = v[0].p;
  return v[0].val;
}

// Exact minimum of r . m over the quarter sphere {|m| = 1, m_y >= 0,
// m_z >= 0}: the optimum is either the free minimum -r/|r| or sits on one of
// the two boundary half-circles or their shared endpoints (+-1, 0, 0).
double min_linear_quarter(const Vec3& r) {
  double best = -std::abs(r.x);
  double n = std::sqrt(dot(r, r));
  if (n > 0 && -r.y >= 0 && -r.z >= 0) best = std::min(best, -n);
  double nxz = std::hypot(r.x, r.z);
  if (nxz > 0 && -r.z >= 0) best = std::min(best, -nxz);
  double nxy = std::hypot(r.x, r.y);
  if (nxy > 0 && -r.y >= 0) best = std::min(best, -nxy);
  return best;
}

// Grid + multistart refinement over one domain, returning the Born minimum.
double minimize_born(const Kernel& kernel, const MeasurementSet& alice,
                     const Domain& domain, const OptimizerConfig& config,
                     bool clamp_to_domain, long& iterations, BlochPoint& argmin) {
  std::vector<GridCell> starts = scan_objective_grid(
      alice, domain, config.grid, config.refine_starts, config.parallel);
  auto eval = [&](double t, double p) {
    if (clamp_to_domain) {
      t = std::clamp(t, 0.0, domain.theta_max);
      p = std::clamp(p, 0.0, domain.phi_max);
    }
    return born_eval(kernel, direction_of(t, p));
  };
  double step = 2.0 * domain.theta_max / (config.grid - 1);
  double best = std::numeric_limits<double>::infinity();
  for (const GridCell& cell : starts) {
    double t_min, p_min;
    double v = nelder_mead(eval, cell.point.theta, cell.point.phi, step,
                           config.max_refine_iterations, config.refine_tol,
                           iterations, t_min, p_min);
    if (v < best) {
      best = v;
      argmin = {t_min, p_min};
    }
  }
  if (!starts.empty() && starts.front().value < best) {
    best = starts.front().value;
    argmin = starts.front().point;
  }
  if (clamp_to_domain) {
    argmin.theta = std::clamp(argmin.theta, 0.0, domain.theta_max);
    argmin.phi = std::clamp(argmin.phi, 0.0, domain.phi_max);
  }
  return best;
}

}  // namespace

Domain Domain::full_sphere() {
  return {std::numbers::pi, 2 * std::numbers::pi};
}

Domain Domain::quarter_sphere() {
  return {std::numbers::pi / 2, std::numbers::pi};
}

Ket BlochPoint::ket() const {
  CVec v(2);
  v << std::cos(theta / 2),
      Complex(std::cos(phi), std::sin(phi)) * std::sin(theta / 2);
  return Ket::normalized(v);
}

std::array<double, 3> BlochPoint::direction() const {
  Vec3 m = direction_of(theta, phi);
  return {m.x, m.y, m.z};
}

double lhs_objective(const BlochPoint& p, const MeasurementSet& alice) {
  Ket psi = p.ket();
  const CVec& amp = psi.amplitudes();
  double total = 0;
  for (int x = 0; x < 3; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (const Mat& m : alice.settings[x].elements)
      best = std::min(best, (amp.adjoint() * m * amp)(0, 0).real());
    total += best;
  }
  return total;
}

double overlap_objective(const BlochPoint& p, const MeasurementSet& alice) {
  return 1.5 * lhs_objective(p, alice);
}

std::vector<GridCell> scan_objective_grid(const MeasurementSet& alice,
                                          const Domain& domain, int n, int k,
                                          bool parallel) {
  if (n < 2) throw std::invalid_argument("scan_objective_grid: need n >= 2");
  if (k < 1) throw std::invalid_argument("scan_objective_grid: need k >= 1");
  Kernel kernel = make_kernel(alice);
  double dt = domain.theta_max / (n - 1);
  double dp = domain.phi_max / (n - 1);
  std::size_t keep = static_cast<std::size_t>(k);

  std::vector<Candidate> best;
  best.reserve(keep + 1);
  if (parallel) {
#pragma omp parallel
    {
      std::vector<Candidate> local;
      local.reserve(keep + 1);
#pragma omp for schedule(static) nowait
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          insert_candidate(local, keep,
                           {born_eval(kernel, direction_of(i * dt, j * dp)),
                            static_cast<long>(i) * n + j});
      // Merging per-thread lists under the same strict (value, index) order
      // makes the outcome independent of thread count and schedule.
#pragma omp critical
      for (const Candidate& c : local) insert_candidate(best, keep, c);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        insert_candidate(best, keep,
                         {born_eval(kernel, direction_of(i * dt, j * dp)),
                          static_cast<long>(i) * n + j});
  }

  std::vector<GridCell> out;
  out.reserve(best.size());
  for (const Candidate& c : best)
    out.push_back({c.value, {(c.index / n) * dt, (c.index % n) * dp}});
  return out;
}

GridCell scan_objective_grid_reference(const MeasurementSet& alice,
                                       const Domain& domain, int n) {
  if (n < 2)
    throw std::invalid_argument("scan_objective_grid_reference: need n >= 2");
  double dt = domain.theta_max / (n - 1);
  double dp = domain.phi_max / (n - 1);
  GridCell best{std::numeric_limits<double>::infinity(), {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      BlochPoint p{i * dt, j * dp};
      double v = lhs_objective(p, alice);
      if (v < best.value) best = {v, p};
    }
  return best;
}

BoundResult optimize_bound(const MeasurementSet& alice,
                           const OptimizerConfig& config) {
  if (config.grid < 2)
    throw std::invalid_argument("optimize_bound: grid must be at least 2");
  if (config.refine_starts < 1)
    throw std::invalid_argument("optimize_bound: need at least one start");
  Kernel kernel = make_kernel(alice);
  BoundResult out{};
  out.grid_resolution = config.grid;
  out.refinement_iterations = 0;

  // Reduced domain, unit-weight convention. The simplex is projected onto
  // the rectangle; for the ideal measurements the minimum is interior, so
  // the clamp never binds at convergence but keeps stray reflections inside.
  double born_min =
      minimize_born(kernel, alice, Domain::quarter_sphere(), config, true,
                    out.refinement_iterations, out.argmin);
  out.objective_at_argmin = 1.5 * born_min;
  out.beta_L = 3.0 - out.objective_at_argmin;

  // Full sphere, Born convention. Angles are left free during refinement;
  // any (theta, phi) names a valid point of the sphere.
  double born_full =
      minimize_born(kernel, alice, Domain::full_sphere(), config, false,
                    out.refinement_iterations, out.argmin_unrestricted);
  out.objective_unrestricted = born_full;
  out.beta_unrestricted = 3.0 - born_full;
  return out;
}

StrategyCheck strategy_cross_check(const MeasurementSet& alice) {
  if (alice.dim() != 2)
    throw std::invalid_argument(
        "strategy_cross_check: measurements must act on a qubit");
  StrategyCheck out{};
  double best_recipe = std::numeric_limits<double>::infinity();
  double best_unres = std::numeric_limits<double>::infinity();
  for (int g0 = 0; g0 < 3; ++g0)
    for (int g1 = 0; g1 < 3; ++g1)
      for (int g2 = 0; g2 < 3; ++g2) {
        Mat h = alice.settings[0].elements[g0] + alice.settings[1].elements[g1] +
                alice.settings[2].elements[g2];
        BlochOp op = bloch_form(h);
        best_recipe =
            std::min(best_recipe, 1.5 * (op.c + min_linear_quarter(op.r)));
        double lam = eig_hermitian(h).values(0);
        if (lam < best_unres) {
          best_unres = lam;
          out.best_strategy = {g0, g1, g2};
        }
      }
  out.beta_recipe = 3.0 - best_recipe;
  out.beta_unrestricted = 3.0 - best_unres;
  return out;
}

LhsModel attaining_model(const MeasurementSet& alice) {
  StrategyCheck check = strategy_cross_check(alice);
  Mat h = Mat::Zero(2, 2);
  for (int x = 0; x < 3; ++x)
    h += alice.settings[x].elements[check.best_strategy[x]];
  EigSystem es = eig_hermitian(h);
  LhsModel model;
  model.weights = {1.0};
  model.states.push_back(Ket::normalized(es.vectors.col(0)));
  model.response.push_back({});
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < 3; ++b)
      model.response[0][y][b] = (b == check.best_strategy[y]) ? 1.0 : 0.0;
  return model;
}

}  // namespace steercert
