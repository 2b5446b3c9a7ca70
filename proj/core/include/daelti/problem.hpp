#pragma once

#include "daelti/dae_model.hpp"
#include "daelti/linalg.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace daelti {

/// Contents of a problem file: JSON object with "E", "A", "B" as arrays of
/// row arrays and optional "Q", "R", "Q0", "z" (array) and "t1" (number).
struct Problem {
  DaeLti dae;
  std::optional<Matrix> Q;
  std::optional<Matrix> R;
  std::optional<Matrix> Q0;
  std::optional<Vector> z;
  std::optional<double> t1;
};

/// Throws ParseError on malformed JSON and ShapeError on inconsistent shapes.
Problem parse_problem(std::string_view json_text);
Problem load_problem(const std::string& path);

std::string problem_to_json(const Problem& p);

}  // namespace daelti
