#pragma once

#include "daelti/linalg.hpp"
#include "daelti/trajectory.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace daelti {

/// Decimal with 17 significant digits ("%.17g").
std::string format_decimal(double v);

/// Writes "rows cols" followed by one line per row.
void write_matrix(std::ostream& os, const Matrix& M);
Matrix read_matrix(std::istream& is);

std::string matrix_to_string(const Matrix& M);
Matrix matrix_from_string(std::string_view text);

/// Comma separated vector, e.g. "1,0.5,-2". Empty text gives a 0-vector.
Vector parse_vector(std::string_view text);

/// CSV with header t,x1..xn,u1..um.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

}  // namespace daelti
