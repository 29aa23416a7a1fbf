#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "steercert/certifier.hpp"
#include "steercert/robustness.hpp"

// Serialization layer. JSON schemas:
//
//   complex number   [re, im]
//   matrix           row-major nested arrays of complex numbers
//   state            {"dim_a": 2, "dim_b": d, "amplitudes": [complex, ...]}
//                    amplitudes in row-major |i>_A |j>_B order
//   measurements     {"settings": [{"elements": [matrix, ...]}, ...]}
//   certification    {"state": state, "measurements": measurements}
//   distribution     {"p": [x][y][a][b] nested arrays of reals}
//
// Structural problems (missing fields, wrong types, non-finite numbers)
// throw ParseError; semantically invalid values (bad dimensions, broken
// normalization) throw std::invalid_argument. The CLI maps the two to
// distinct exit codes.

namespace steercert::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j, const char* where = "matrix");

nlohmann::json state_to_json(const Ket& state, int dim_b);
std::pair<Ket, int> state_from_json(const nlohmann::json& j);

nlohmann::json measurements_to_json(const std::vector<Povm>& settings);
std::vector<Povm> measurements_from_json(const nlohmann::json& j);

// Requires exactly three parsed settings.
MeasurementSet measurement_set_from_json(const nlohmann::json& j);
nlohmann::json measurements_to_json(const MeasurementSet& set);

nlohmann::json certification_input_to_json(const CertificationInput& input);
CertificationInput certification_input_from_json(const nlohmann::json& j);

nlohmann::json distribution_to_json(const JointDistribution& d);
JointDistribution distribution_from_json(const nlohmann::json& j);

// Shortest printf "%.Ng" representation, N <= 12, that parses back to the
// same value as the 12-significant-digit form. Used for all CSV numbers so
// files diff cleanly across platforms.
std::string format_double(double v);

// Header "delta,epsilon,w_closed,w_sim,discrepancy", LF line endings.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Header "x,y,a,b", LF line endings.
std::string shots_to_csv(const std::vector<ShotRecord>& shots);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace steercert::io
