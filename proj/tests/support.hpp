#pragma once

// Shared helpers for the test binaries: deterministic random objects built on
// the library's own uniform01 (so test inputs are identical on every
// platform) and a small process wrapper for driving the CLI.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "steercert/certifier.hpp"
#include "steercert/linalg.hpp"
#include "steercert/povm.hpp"
#include "steercert/scenario.hpp"

namespace steercert::testing {

inline Complex random_gauss(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0) u1 = uniform01(rng);
  double u2 = uniform01(rng);
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_gauss(rng);
  return m;
}

inline Ket random_ket(int d, std::mt19937_64& rng) {
  return Ket::normalized(random_matrix(d, 1, rng).col(0));
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// rephased positive, which removes the QR gauge freedom.
inline Mat random_unitary(int d, std::mt19937_64& rng) {
  Mat g = random_matrix(d, d, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex rii = r(i, i);
    q.col(i) *= std::abs(rii) > 0 ? rii / std::abs(rii) : Complex(1, 0);
  }
  return q;
}

inline Mat random_psd(int d, std::mt19937_64& rng) {
  Mat g = random_matrix(d, d, rng);
  return g * g.adjoint();
}

// Unit-trace PSD matrix, generic rank d.
inline Mat random_density(int d, std::mt19937_64& rng) {
  Mat rho = random_psd(d, rng);
  return rho / rho.trace();
}

// Random POVM with the requested number of outcomes: PSD seeds G_b whitened
// by the inverse square root of their sum.
inline Povm random_povm(int d, int outcomes, std::mt19937_64& rng) {
  std::vector<Mat> seeds;
  Mat total = Mat::Zero(d, d);
  for (int b = 0; b < outcomes; ++b) {
    seeds.push_back(random_psd(d, rng));
    total += seeds.back();
  }
  EigSystem es = eig_hermitian(total);
  Mat inv_sqrt = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    inv_sqrt += (1.0 / std::sqrt(es.values(k))) * es.vectors.col(k) *
                es.vectors.col(k).adjoint();
  Povm p;
  p.dim = d;
  for (const Mat& g : seeds) {
    Mat el = inv_sqrt * g * inv_sqrt;
    p.elements.push_back(0.5 * (el + el.adjoint()));
  }
  return p;
}

inline MeasurementSet random_measurement_set(int d, std::mt19937_64& rng) {
  MeasurementSet set;
  for (int x = 0; x < 3; ++x) set.settings[x] = random_povm(d, 3, rng);
  return set;
}

// LHS model with random mixing weights, random pure qubit hidden states and
// random stochastic (not merely deterministic) responses.
inline LhsModel random_lhs_model(int components, std::mt19937_64& rng) {
  LhsModel model;
  double total = 0;
  for (int l = 0; l < components; ++l) {
    double w = uniform01(rng) + 1e-3;
    model.weights.push_back(w);
    total += w;
    model.states.push_back(random_ket(2, rng));
    std::array<std::array<double, 3>, 3> resp{};
    for (int y = 0; y < 3; ++y) {
      double row = 0;
      for (int b = 0; b < 3; ++b) {
        resp[y][b] = uniform01(rng) + 1e-3;
        row += resp[y][b];
      }
      for (int b = 0; b < 3; ++b) resp[y][b] /= row;
    }
    model.response.push_back(resp);
  }
  for (double& w : model.weights) w /= total;
  return model;
}

// Ideal configuration embedded in Bob dimension d and rotated by the unitary
// v: state (1 (x) v) |phi+ embedded>, elements v (N (+) junk) v^dag where the
// junk blocks form their own POVM on the complement of the support. Any such
// input must certify perfectly; it is the reference pair in disguise.
inline CertificationInput rotated_ideal_input(int d, const Mat& v,
                                              std::mt19937_64& rng) {
  MeasurementSet bob = bob_ideal();
  MeasurementSet big;
  if (d == 2) {
    big = bob;
  } else {
    for (int x = 0; x < 3; ++x) {
      Povm junk = random_povm(d - 2, 3, rng);
      big.settings[x].dim = d;
      for (int a = 0; a < 3; ++a)
        big.settings[x].elements.push_back(
            block_diag(bob.settings[x].elements[a], junk.elements[a]));
    }
  }
  Mat id2 = Mat::Identity(2, 2);
  Ket state = Ket(tensor(id2, v) * embed_bob(phi_plus(), d).amplitudes());
  return CertificationInput(std::move(state), d, conjugated(big, v));
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `cli_path args`, capturing stdout/stderr. `env_prefix` is prepended
// verbatim and can carry VAR=value assignments.
inline CliResult run_cli(const std::string& cli_path, const std::string& args,
                         const std::string& env_prefix = "") {
  static int counter = 0;
  std::string base = "/tmp/steercert_test_" + std::to_string(::getpid()) + "_" +
                     std::to_string(counter++);
  std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + "\"" + cli_path +
                    "\" " + args + " > " + base + ".out 2> " + base + ".err";
  int rc = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(base + ".out");
  result.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return result;
}

}  // namespace steercert::testing
