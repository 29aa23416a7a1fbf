#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <random>

#include "steercert/io.hpp"
#include "support.hpp"

using namespace steercert;
using nlohmann::json;
using steercert::testing::random_ket;
using steercert::testing::random_matrix;
using steercert::testing::random_measurement_set;

TEST_CASE("matrix round trip preserves entries") {
  std::mt19937_64 rng(71);
  Mat m = random_matrix(3, 2, rng);
  Mat back = io::matrix_from_json(io::matrix_to_json(m));
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 2);
  CHECK(frobenius_distance(m, back) == 0.0);
}

TEST_CASE("state round trip across dimensions") {
  std::mt19937_64 rng(72);
  for (int db : {2, 3, 5, 8}) {
    Ket psi = random_ket(2 * db, rng);
    auto [back, dim_b] = io::state_from_json(io::state_to_json(psi, db));
    CHECK(dim_b == db);
    CHECK((back.amplitudes() - psi.amplitudes()).norm() < 1e-15);
  }
}

TEST_CASE("measurement set and certification input round trips") {
  std::mt19937_64 rng(73);
  MeasurementSet set = random_measurement_set(3, rng);
  MeasurementSet back = io::measurement_set_from_json(io::measurements_to_json(set));
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      CHECK(frobenius_distance(set.settings[x].elements[a],
                               back.settings[x].elements[a]) == 0.0);

  CertificationInput input(random_ket(6, rng), 3, set);
  CertificationInput rt =
      io::certification_input_from_json(io::certification_input_to_json(input));
  CHECK(rt.dim_b == 3);
  CHECK((rt.state.amplitudes() - input.state.amplitudes()).norm() < 1e-15);
}

TEST_CASE("distribution round trip is lossless") {
  JointDistribution d = distribution_from(phi_plus(), 2, alice_ideal(), bob_ideal());
  JointDistribution back = io::distribution_from_json(io::distribution_to_json(d));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          CHECK(d.at(x, y, a, b) == back.at(x, y, a, b));
}

TEST_CASE("structural defects raise parse errors") {
  CHECK_THROWS_AS(io::state_from_json(json::array()), io::ParseError);
  CHECK_THROWS_AS(io::state_from_json(json{{"dim_a", 2}, {"dim_b", 2}}),
                  io::ParseError);  // missing amplitudes

  json bad_complex = {{"dim_a", 2},
                      {"dim_b", 2},
                      {"amplitudes", json::array({json::array({1.0}), 0, 0, 0})}};
  CHECK_THROWS_AS(io::state_from_json(bad_complex), io::ParseError);

  json ragged = json::array({json::array({json::array({1.0, 0.0})}),
                             json::array({})});
  CHECK_THROWS_AS(io::matrix_from_json(ragged), io::ParseError);

  json inf_entry = json::array(
      {json::array({json::array({std::numeric_limits<double>::infinity(), 0.0})})});
  CHECK_THROWS_AS(io::matrix_from_json(inf_entry), io::ParseError);

  CHECK_THROWS_AS(io::measurements_from_json(json{{"settings", json::array()}}),
                  io::ParseError);
  CHECK_THROWS_AS(io::distribution_from_json(json{{"p", json::array()}}),
                  io::ParseError);
}

TEST_CASE("semantic defects raise invalid_argument") {
  // wrong alice dimension
  json wrong_da = io::state_to_json(phi_plus(), 2);
  wrong_da["dim_a"] = 3;
  CHECK_THROWS_AS(io::state_from_json(wrong_da), std::invalid_argument);

  // amplitude count inconsistent with the declared dimensions
  json short_amps = io::state_to_json(phi_plus(), 2);
  short_amps["amplitudes"].erase(3);
  CHECK_THROWS_AS(io::state_from_json(short_amps), std::invalid_argument);

  // unnormalized amplitudes
  json unnorm = io::state_to_json(phi_plus(), 2);
  unnorm["amplitudes"][0] = json::array({5.0, 0.0});
  CHECK_THROWS_AS(io::state_from_json(unnorm), std::invalid_argument);

  // a measurement-set parse requires exactly three settings
  std::mt19937_64 rng(74);
  MeasurementSet set = random_measurement_set(2, rng);
  json four = io::measurements_to_json(set);
  four["settings"].push_back(four["settings"][0]);
  CHECK(io::measurements_from_json(four).size() == 4);  // generic parse is fine
  CHECK_THROWS_AS(io::measurement_set_from_json(four), std::invalid_argument);

  // ragged element dimensions within one setting
  json mixed = io::measurements_to_json(set);
  mixed["settings"][0]["elements"][1] =
      io::matrix_to_json(Mat::Identity(3, 3));
  CHECK_THROWS_AS(io::measurements_from_json(mixed), std::invalid_argument);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(3.0) == "3");
  CHECK(io::format_double(2.72) == "2.72");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-1.5) == "-1.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.333333333333");

  // the printed string parses back to the 12-digit reference value
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 500; ++trial) {
    double v = (uniform01(rng) - 0.5) * std::pow(10.0, int(uniform01(rng) * 12) - 6);
    char ref[40];
    std::snprintf(ref, sizeof ref, "%.12g", v);
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) ==
          std::strtod(ref, nullptr));
  }
}

TEST_CASE("sweep csv is byte-stable with LF endings") {
  std::vector<SweepRow> rows(2);
  rows[0] = {0.0, 0.0, 3.0, 3.0, 0.0, false};
  rows[1] = {0.1, 0.25, 2.5, 2.5000000001, 1e-10, false};
  std::string csv = io::sweep_to_csv(rows);
  CHECK(csv ==
        "delta,epsilon,w_closed,w_sim,discrepancy\n"
        "0,0,3,3,0\n"
        "0.1,0.25,2.5,2.5000000001,1e-10\n");
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("shot csv layout") {
  std::vector<ShotRecord> shots = {{0, 1, 2, 0}, {2, 2, 1, 1}};
  CHECK(io::shots_to_csv(shots) == "x,y,a,b\n0,1,2,0\n2,2,1,1\n");
}

TEST_CASE("file loading separates missing, malformed and valid inputs") {
  CHECK_THROWS_AS(io::load_json_file("/nonexistent/steercert.json"), io::ParseError);

  std::string path = "/tmp/steercert_io_test.json";
  io::write_text_file(path, "{not json");
  CHECK_THROWS_AS(io::load_json_file(path), io::ParseError);

  io::write_text_file(path, "{\"k\": 1}\n");
  json j = io::load_json_file(path);
  CHECK(j["k"] == 1);
  std::remove(path.c_str());
}
