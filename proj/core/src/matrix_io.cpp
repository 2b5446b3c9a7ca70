#include "daelti/matrix_io.hpp"

#include "daelti/errors.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace daelti {

std::string format_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const Matrix& M) {
  os << M.rows() << ' ' << M.cols() << '\n';
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j > 0) os << ' ';
      os << format_decimal(M(i, j));
    }
    os << '\n';
  }
}

namespace {

double parse_double(const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError("invalid number: " + tok);
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("invalid number: " + tok);
  } catch (const std::out_of_range&) {
    throw ParseError("number out of range: " + tok);
  }
}

}  // namespace

Matrix read_matrix(std::istream& is) {
  long long rows = -1;
  long long cols = -1;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) throw ParseError("matrix: bad header");
  Matrix M(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      std::string tok;
      if (!(is >> tok)) throw ParseError("matrix: too few entries");
      M(i, j) = parse_double(tok);
    }
  }
  require_finite(M, "matrix");
  return M;
}

std::string matrix_to_string(const Matrix& M) {
  std::ostringstream os;
  write_matrix(os, M);
  return os.str();
}

Matrix matrix_from_string(std::string_view text) {
  std::istringstream is{std::string(text)};
  Matrix M = read_matrix(is);
  std::string extra;
  if (is >> extra) throw ParseError("matrix: trailing content");
  return M;
}

Vector parse_vector(std::string_view text) {
  std::vector<double> vals;
  std::string s(text);
  if (s.find_first_not_of(" \t") == std::string::npos) return Vector(0);
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("vector: empty component");
    vals.push_back(parse_double(tok.substr(b, e - b + 1)));
  }
  if (!s.empty() && s.back() == ',') throw ParseError("vector: empty component");
  Vector v(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Index>(i)) = vals[i];
  require_finite(v, "vector");
  return v;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  traj.validate();
  os << 't';
  for (Index i = 0; i < traj.x.rows(); ++i) os << ",x" << (i + 1);
  for (Index i = 0; i < traj.u.rows(); ++i) os << ",u" << (i + 1);
  os << '\n';
  for (Index k = 0; k < traj.size(); ++k) {
    os << format_decimal(traj.times(k));
    for (Index i = 0; i < traj.x.rows(); ++i) os << ',' << format_decimal(traj.x(i, k));
    for (Index i = 0; i < traj.u.rows(); ++i) os << ',' << format_decimal(traj.u(i, k));
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("csv: missing header");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);
  }
  if (names.empty() || names[0] != "t") throw ParseError("csv: header must start with t");
  Index n = 0;
  Index m = 0;
  for (std::size_t i = 1; i < names.size(); ++i) {
    const std::string& nm = names[i];
    if (nm == "x" + std::to_string(n + 1) && m == 0) {
      ++n;
    } else if (nm == "u" + std::to_string(m + 1)) {
      ++m;
    } else {
      throw ParseError("csv: unexpected column " + nm);
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_double(tok));
    if (row.size() != names.size()) throw ParseError("csv: wrong number of columns");
    rows.push_back(std::move(row));
  }
  Trajectory traj;
  const Index N = static_cast<Index>(rows.size());
  traj.times.resize(N);
  traj.x.resize(n, N);
  traj.u.resize(m, N);
  for (Index k = 0; k < N; ++k) {
    const auto& r = rows[static_cast<std::size_t>(k)];
    traj.times(k) = r[0];
    for (Index i = 0; i < n; ++i) traj.x(i, k) = r[static_cast<std::size_t>(1 + i)];
    for (Index i = 0; i < m; ++i) traj.u(i, k) = r[static_cast<std::size_t>(1 + n + i)];
  }
  traj.validate();
  return traj;
}

}  // namespace daelti
