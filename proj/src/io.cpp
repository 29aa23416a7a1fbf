#include "steercert/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace steercert::io {
namespace {

using nlohmann::json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string(where) + ": complex number must be [re, im]");
  double re = j[0].get<double>(), im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im))
    throw ParseError(std::string(where) + ": non-finite complex component");
  return {re, im};
}

const json& require(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

}  // namespace

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string(where) + ": matrix must be a nonempty array of rows");
  auto rows = static_cast<Eigen::Index>(j.size());
  auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  if (cols == 0) throw ParseError(std::string(where) + ": empty matrix row");
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ParseError(std::string(where) + ": ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], where);
  }
  return m;
}

json state_to_json(const Ket& state, int dim_b) {
  json amps = json::array();
  for (int i = 0; i < state.dim(); ++i) amps.push_back(complex_to_json(state[i]));
  return {{"dim_a", 2}, {"dim_b", dim_b}, {"amplitudes", std::move(amps)}};
}

std::pair<Ket, int> state_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("state: expected an object");
  const json& da = require(j, "dim_a", "state");
  const json& db = require(j, "dim_b", "state");
  const json& amps = require(j, "amplitudes", "state");
  if (!da.is_number_integer() || !db.is_number_integer() || !amps.is_array())
    throw ParseError("state: dim_a/dim_b must be integers, amplitudes an array");
  int dim_a = da.get<int>(), dim_b = db.get<int>();
  if (dim_a != 2)
    throw std::invalid_argument("state: only dim_a = 2 is supported");
  if (dim_b < 1 || static_cast<int>(amps.size()) != dim_a * dim_b)
    throw std::invalid_argument("state: amplitude count does not match dim_a * dim_b");
  CVec v(dim_a * dim_b);
  for (int i = 0; i < dim_a * dim_b; ++i)
    v(i) = complex_from_json(amps[static_cast<std::size_t>(i)], "state amplitudes");
  return {Ket(v), dim_b};  // Ket enforces normalization
}

json measurements_to_json(const std::vector<Povm>& settings) {
  json out_settings = json::array();
  for (const Povm& p : settings) {
    json elements = json::array();
    for (const Mat& n : p.elements) elements.push_back(matrix_to_json(n));
    out_settings.push_back({{"elements", std::move(elements)}});
  }
  return {{"settings", std::move(out_settings)}};
}

json measurements_to_json(const MeasurementSet& set) {
  return measurements_to_json(
      std::vector<Povm>(set.settings.begin(), set.settings.end()));
}

std::vector<Povm> measurements_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("measurements: expected an object");
  const json& settings = require(j, "settings", "measurements");
  if (!settings.is_array() || settings.empty())
    throw ParseError("measurements: \"settings\" must be a nonempty array");
  std::vector<Povm> out;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    char where[48];
    std::snprintf(where, sizeof where, "measurements.settings[%zu]", s);
    if (!settings[s].is_object()) throw ParseError(std::string(where) + ": expected an object");
    const json& elements = require(settings[s], "elements", where);
    if (!elements.is_array() || elements.empty())
      throw ParseError(std::string(where) + ": \"elements\" must be a nonempty array");
    Povm p;
    for (const json& el : elements) p.elements.push_back(matrix_from_json(el, where));
    p.dim = static_cast<int>(p.elements[0].rows());
    for (const Mat& n : p.elements)
      if (n.rows() != p.dim || n.cols() != p.dim)
        throw std::invalid_argument(std::string(where) +
                                    ": elements must be square with a common dimension");
    out.push_back(std::move(p));
  }
  return out;
}

MeasurementSet measurement_set_from_json(const json& j) {
  std::vector<Povm> settings = measurements_from_json(j);
  if (settings.size() != 3)
    throw std::invalid_argument("measurements: expected exactly 3 settings");
  MeasurementSet set;
  for (int x = 0; x < 3; ++x) set.settings[x] = std::move(settings[x]);
  return set;
}

json certification_input_to_json(const CertificationInput& input) {
  return {{"state", state_to_json(input.state, input.dim_b)},
          {"measurements", measurements_to_json(input.bob)}};
}

CertificationInput certification_input_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("certification input: expected an object");
  auto [state, dim_b] = state_from_json(require(j, "state", "certification input"));
  MeasurementSet bob =
      measurement_set_from_json(require(j, "measurements", "certification input"));
  return CertificationInput(std::move(state), dim_b, std::move(bob));
}

json distribution_to_json(const JointDistribution& d) {
  json px = json::array();
  for (int x = 0; x < 3; ++x) {
    json py = json::array();
    for (int y = 0; y < 3; ++y) {
      json pa = json::array();
      for (int a = 0; a < 3; ++a) {
        json pb = json::array();
        for (int b = 0; b < 3; ++b) pb.push_back(d.at(x, y, a, b));
        pa.push_back(std::move(pb));
      }
      py.push_back(std::move(pa));
    }
    px.push_back(std::move(py));
  }
  return {{"p", std::move(px)}};
}

JointDistribution distribution_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("distribution: expected an object");
  const json& p = require(j, "p", "distribution");
  JointDistribution d;
  const char* shape_msg = "distribution: \"p\" must be a 3x3x3x3 array of finite reals";
  if (!p.is_array() || p.size() != 3) throw ParseError(shape_msg);
  for (int x = 0; x < 3; ++x) {
    if (!p[x].is_array() || p[x].size() != 3) throw ParseError(shape_msg);
    for (int y = 0; y < 3; ++y) {
      if (!p[x][y].is_array() || p[x][y].size() != 3) throw ParseError(shape_msg);
      for (int a = 0; a < 3; ++a) {
        if (!p[x][y][a].is_array() || p[x][y][a].size() != 3) throw ParseError(shape_msg);
        for (int b = 0; b < 3; ++b) {
          if (!p[x][y][a][b].is_number()) throw ParseError(shape_msg);
          double v = p[x][y][a][b].get<double>();
          if (!std::isfinite(v)) throw ParseError(shape_msg);
          d.at(x, y, a, b) = v;
        }
      }
    }
  }
  return d;
}

std::string format_double(double v) {
  char ref[40];
  std::snprintf(ref, sizeof ref, "%.12g", v);
  double target = std::strtod(ref, nullptr);
  for (int digits = 1; digits < 12; ++digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == target) return buf;
  }
  return ref;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "delta,epsilon,w_closed,w_sim,discrepancy\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.delta);
    out += ',';
    out += format_double(r.epsilon);
    out += ',';
    out += format_double(r.w_closed);
    out += ',';
    out += format_double(r.w_sim);
    out += ',';
    out += format_double(r.discrepancy);
    out += '\n';
  }
  return out;
}

std::string shots_to_csv(const std::vector<ShotRecord>& shots) {
  std::string out = "x,y,a,b\n";
  for (const ShotRecord& s : shots) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d\n", s.x, s.y, s.a, s.b);
    out += buf;
  }
  return out;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace steercert::io
