// Writes the bundled fixture files. Run from the repo root after schema
// changes: build/make_fixtures [output_dir]. The files are committed, this
// tool only exists so they never have to be edited by hand.

#include <iostream>
#include <string>

#include "steercert/certifier.hpp"
#include "steercert/io.hpp"
#include "steercert/povm.hpp"

using namespace steercert;

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "fixtures";

  // Reference pair at d = 2; certify must pass on it.
  CertificationInput ideal(phi_plus(), 2, bob_ideal());
  io::write_text_file(dir + "/ideal_certification.json",
                      io::certification_input_to_json(ideal).dump(2) + "\n");

  // |00> with the ideal measurements: parses and validates, then fails
  // certification with the not-entangled error path.
  CVec zz = CVec::Zero(4);
  zz(0) = 1.0;
  CertificationInput product(Ket(zz), 2, bob_ideal());
  io::write_text_file(dir + "/product_state.json",
                      io::certification_input_to_json(product).dump(2) + "\n");

  // Single six-outcome setting mixing two trine triples at half weight. A
  // valid rank-one POVM, but six elements cannot be linearly independent in
  // the four-dimensional qubit operator space, so it is not extremal.
  Povm six;
  six.dim = 2;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 3; ++a)
      six.elements.push_back((1.0 / 3.0) * alice_vector(a, x).projector());
  io::write_text_file(dir + "/six_outcome_trines.json",
                      io::measurements_to_json(std::vector<Povm>{six}).dump(2) + "\n");

  // Uniform correlations: every outcome pair at 1/9 in every setting pair.
  // W evaluates to 2 on it, the sampler acceptance target.
  JointDistribution uniform;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) uniform.at(x, y, a, b) = 1.0 / 9.0;
  io::write_text_file(dir + "/uniform_distribution.json",
                      io::distribution_to_json(uniform).dump(2) + "\n");

  std::cout << "wrote 4 fixtures to " << dir << "\n";
  return 0;
}
