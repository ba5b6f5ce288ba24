#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbsde/driver.hpp"

namespace rbsde {

/// Malformed problem document; the message carries the location (JSON
/// line/column or the offending field path).
struct ProblemParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scalar parameter that is either a constant or a polynomial in t,
/// written in the document as a number or {"poly": [c0, c1, ...]}.
struct PolyOrConst {
  std::vector<double> coeffs{0.0};

  double operator()(double t) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
  }
  bool is_constant() const { return coeffs.size() <= 1; }
};

struct DriverDef {
  std::string kind;  // "linear" | "constant" | "zero" | "custom-table"
  PolyOrConst r;     // linear
  PolyOrConst theta;
  double value = 0.0;                       // constant
  std::vector<std::vector<double>> values;  // custom-table, slice i: i+1 entries
  std::optional<PolyOrConst> mu;            // Lipschitz data overrides
  std::optional<PolyOrConst> gamma;
};

struct TerminalDef {
  std::string kind;  // "constant" | "identity" | "put" | "custom-table"
  double value = 0.0;
  double strike = 0.0, spot = 0.0, rate = 0.0, sigma = 0.0;  // put
  std::vector<double> values;  // custom-table, N+1 entries
};

struct ObstacleDef {
  std::string kind;  // "constant" | "affine-time" | "put" | "custom-table"
  double value = 0.0;
  double c0 = 0.0, c1 = 0.0;  // affine-time: S(t) = c0 + c1·t
  double strike = 0.0, spot = 0.0, rate = 0.0, sigma = 0.0;  // put
  std::vector<std::vector<double>> values;  // custom-table
};

struct OracleDef {
  std::string kind;  // "crr-put" | "linear" | "brute-force"
  double tolerance = 0.0;  // relative for crr-put, absolute otherwise
  double strike = 0.0, spot = 0.0, rate = 0.0, sigma = 0.0;  // crr-put
};

/// Faithful image of the problem JSON, before evaluators are bound to a grid.
struct ProblemDocument {
  double horizon = 0.0;
  int steps = 0;
  double beta = 0.0;
  double epsilon = 0.0;
  DriverDef driver;
  TerminalDef terminal;
  ObstacleDef obstacle;
  std::optional<OracleDef> oracle;
};

struct ProblemOverrides {
  std::optional<double> beta;
  std::optional<int> steps;  // rejected when any component is a custom-table
};

ProblemDocument parse_problem_json(const std::string& text);
ProblemDocument load_problem_file(const std::string& path);

/// Bind the document to evaluators on its (possibly overridden) grid.
ProblemSpec build_problem(const ProblemDocument& doc,
                          const ProblemOverrides& overrides = {});

}  // namespace rbsde
