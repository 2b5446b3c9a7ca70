#include "daelti/problem.hpp"

#include "daelti/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace daelti {

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw ParseError(std::string(name) + ": expected an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError(std::string(name) + ": each row must be an array");
    if (cols < 0) cols = static_cast<Index>(row.size());
    if (static_cast<Index>(row.size()) != cols) throw ShapeError(std::string(name) + ": ragged rows");
  }
  if (cols < 0) cols = 0;
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) {
      const json& v = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (!v.is_number()) throw ParseError(std::string(name) + ": entries must be numbers");
      M(i, k) = v.get<double>();
    }
  }
  require_finite(M, name);
  return M;
}

json matrix_to_json(const Matrix& M) {
  json out = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    out.push_back(row);
  }
  return out;
}

// An empty array has no column count; take it from the companion matrix.
Matrix with_rows(Matrix M, Index rows) {
  if (M.rows() == 0 && rows > 0) return Matrix(rows, 0);
  return M;
}

}  // namespace

Problem parse_problem(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("problem: top level must be an object");
  for (const char* key : {"E", "A", "B"}) {
    if (!j.contains(key)) throw ParseError(std::string("problem: missing member ") + key);
  }
  const Matrix E = matrix_from_json(j["E"], "E");
  const Matrix A = matrix_from_json(j["A"], "A");
  const Matrix B = with_rows(matrix_from_json(j["B"], "B"), E.rows());
  Problem p{DaeLti(E, A, B), std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  if (j.contains("Q")) p.Q = matrix_from_json(j["Q"], "Q");
  if (j.contains("R")) p.R = matrix_from_json(j["R"], "R");
  if (j.contains("Q0")) p.Q0 = matrix_from_json(j["Q0"], "Q0");
  if (j.contains("z")) {
    const json& z = j["z"];
    if (!z.is_array()) throw ParseError("z: expected an array");
    Vector v(static_cast<Index>(z.size()));
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!z[i].is_number()) throw ParseError("z: entries must be numbers");
      v(static_cast<Index>(i)) = z[i].get<double>();
    }
    if (v.size() != E.rows()) throw ShapeError("z: length must equal the number of rows of E");
    p.z = v;
  }
  if (j.contains("t1")) {
    if (!j["t1"].is_number()) throw ParseError("t1: expected a number");
    p.t1 = j["t1"].get<double>();
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string problem_to_json(const Problem& p) {
  json j;
  j["E"] = matrix_to_json(p.dae.E());
  j["A"] = matrix_to_json(p.dae.A());
  j["B"] = matrix_to_json(p.dae.B());
  if (p.Q) j["Q"] = matrix_to_json(*p.Q);
  if (p.R) j["R"] = matrix_to_json(*p.R);
  if (p.Q0) j["Q0"] = matrix_to_json(*p.Q0);
  if (p.z) j["z"] = std::vector<double>(p.z->data(), p.z->data() + p.z->size());
  if (p.t1) j["t1"] = *p.t1;
  return j.dump(2);
}

}  // namespace daelti
