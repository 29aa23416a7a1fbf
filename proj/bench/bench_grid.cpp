// Timing comparison of the parallel kernels against their serial reference
// paths. Not a test target; numbers land on stdout. Usage:
//
//   bench_grid [grid_n] [sweep_n]
//
// grid_n:  points per axis for the objective grid scan (default 1500)
// sweep_n: points per axis for the robustness sweep (default 60)

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "steercert/lhs_bound.hpp"
#include "steercert/robustness.hpp"

using namespace steercert;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = (lo * (n - 1 - i) + hi * i) / (n - 1);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int grid_n = argc > 1 ? std::atoi(argv[1]) : 1500;
  int sweep_n = argc > 2 ? std::atoi(argv[2]) : 60;
  if (grid_n < 2 || sweep_n < 2) {
    std::fprintf(stderr, "grid_n and sweep_n must be >= 2\n");
    return 1;
  }

  MeasurementSet alice = alice_ideal();
  Domain dom = Domain::quarter_sphere();
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  std::printf("objective grid scan, %d x %d points\n", grid_n, grid_n);
  auto t0 = std::chrono::steady_clock::now();
  GridCell par = scan_objective_grid(alice, dom, grid_n, 1, true)[0];
  double t_par = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  GridCell ser = scan_objective_grid(alice, dom, grid_n, 1, false)[0];
  double t_ser = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  GridCell ref = scan_objective_grid_reference(alice, dom, grid_n);
  double t_ref = seconds_since(t0);

  std::printf("  kernel parallel  %8.3f s   min %.15f\n", t_par, par.value);
  std::printf("  kernel serial    %8.3f s   min %.15f   speedup %.2fx\n", t_ser,
              ser.value, t_ser / t_par);
  std::printf("  complex serial   %8.3f s   min %.15f   speedup %.2fx\n", t_ref,
              ref.value, t_ref / t_par);
  double drift = std::max(std::abs(par.value - ser.value), std::abs(par.value - ref.value));
  std::printf("  max disagreement %.3e %s\n\n", drift, drift < 1e-12 ? "(ok)" : "(BAD)");

  std::printf("robustness sweep, %d x %d rows\n", sweep_n, sweep_n);
  std::vector<double> deltas = linspace(-0.2, 0.2, sweep_n);
  std::vector<double> epsilons = linspace(0.0, 0.5, sweep_n);

  t0 = std::chrono::steady_clock::now();
  std::vector<SweepRow> rows_par = sweep(deltas, epsilons, true);
  double s_par = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<SweepRow> rows_ser = sweep(deltas, epsilons, false);
  double s_ser = seconds_since(t0);

  double sweep_drift = 0;
  for (std::size_t i = 0; i < rows_par.size(); ++i)
    sweep_drift = std::max(sweep_drift, std::abs(rows_par[i].w_sim - rows_ser[i].w_sim));
  std::printf("  parallel         %8.3f s\n", s_par);
  std::printf("  serial           %8.3f s   speedup %.2fx\n", s_ser, s_ser / s_par);
  std::printf("  max disagreement %.3e %s\n", sweep_drift,
              sweep_drift == 0 ? "(bit-identical)" : "(BAD)");
  return 0;
}
