#include "rbsde/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rbsde {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const char* context) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ProblemParseError(std::string("missing field '") + key + "' in " + context);
  }
  return *it;
}

double number(const json& v, const char* context) {
  if (!v.is_number()) {
    throw ProblemParseError(std::string("expected a number for ") + context);
  }
  return v.get<double>();
}

int integer(const json& v, const char* context) {
  if (!v.is_number_integer()) {
    throw ProblemParseError(std::string("expected an integer for ") + context);
  }
  return v.get<int>();
}

PolyOrConst poly_or_const(const json& v, const char* context) {
  PolyOrConst p;
  if (v.is_number()) {
    p.coeffs = {v.get<double>()};
    return p;
  }
  if (v.is_object() && v.contains("poly") && v.at("poly").is_array()) {
    p.coeffs.clear();
    for (const auto& c : v.at("poly")) p.coeffs.push_back(number(c, context));
    if (p.coeffs.empty()) p.coeffs = {0.0};
    return p;
  }
  throw ProblemParseError(std::string("expected a number or {\"poly\": [...]} for ") +
                          context);
}

void read_put_params(const json& obj, const char* context, double& strike,
                     double& spot, double& rate, double& sigma) {
  strike = number(require(obj, "strike", context), context);
  spot = number(require(obj, "spot", context), context);
  rate = number(require(obj, "rate", context), context);
  sigma = number(require(obj, "sigma", context), context);
}

DriverDef parse_driver(const json& obj) {
  DriverDef def;
  def.kind = require(obj, "kind", "driver").get<std::string>();
  if (def.kind == "linear") {
    def.r = poly_or_const(require(obj, "r", "driver"), "driver.r");
    if (obj.contains("theta")) {
      def.theta = poly_or_const(obj.at("theta"), "driver.theta");
    }
  } else if (def.kind == "constant") {
    def.value = number(require(obj, "value", "driver"), "driver.value");
  } else if (def.kind == "zero") {
    // no parameters
  } else if (def.kind == "custom-table") {
    const json& rows = require(obj, "values", "driver");
    if (!rows.is_array()) {
      throw ProblemParseError("driver.values must be an array of slices");
    }
    for (const auto& row : rows) {
      def.values.emplace_back();
      for (const auto& c : row) def.values.back().push_back(number(c, "driver.values"));
    }
  } else {
    throw ProblemParseError("unknown driver kind '" + def.kind +
                            "' (expected linear, constant, zero, custom-table)");
  }
  if (obj.contains("mu")) def.mu = poly_or_const(obj.at("mu"), "driver.mu");
  if (obj.contains("gamma")) def.gamma = poly_or_const(obj.at("gamma"), "driver.gamma");
  return def;
}

TerminalDef parse_terminal(const json& obj) {
  TerminalDef def;
  def.kind = require(obj, "kind", "terminal").get<std::string>();
  if (def.kind == "constant") {
    def.value = number(require(obj, "value", "terminal"), "terminal.value");
  } else if (def.kind == "identity") {
    // xi(w) = w
  } else if (def.kind == "put") {
    read_put_params(obj, "terminal", def.strike, def.spot, def.rate, def.sigma);
  } else if (def.kind == "custom-table") {
    for (const auto& c : require(obj, "values", "terminal")) {
      def.values.push_back(number(c, "terminal.values"));
    }
  } else {
    throw ProblemParseError("unknown terminal kind '" + def.kind +
                            "' (expected constant, identity, put, custom-table)");
  }
  return def;
}

ObstacleDef parse_obstacle(const json& obj) {
  ObstacleDef def;
  def.kind = require(obj, "kind", "obstacle").get<std::string>();
  if (def.kind == "constant") {
    def.value = number(require(obj, "value", "obstacle"), "obstacle.value");
  } else if (def.kind == "affine-time") {
    def.c0 = number(require(obj, "c0", "obstacle"), "obstacle.c0");
    def.c1 = number(require(obj, "c1", "obstacle"), "obstacle.c1");
  } else if (def.kind == "put") {
    read_put_params(obj, "obstacle", def.strike, def.spot, def.rate, def.sigma);
  } else if (def.kind == "custom-table") {
    const json& rows = require(obj, "values", "obstacle");
    if (!rows.is_array()) {
      throw ProblemParseError("obstacle.values must be an array of slices");
    }
    for (const auto& row : rows) {
      def.values.emplace_back();
      for (const auto& c : row) {
        def.values.back().push_back(number(c, "obstacle.values"));
      }
    }
  } else {
    throw ProblemParseError("unknown obstacle kind '" + def.kind +
                            "' (expected constant, affine-time, put, custom-table)");
  }
  return def;
}

OracleDef parse_oracle(const json& obj) {
  OracleDef def;
  def.kind = require(obj, "kind", "oracle").get<std::string>();
  if (def.kind != "crr-put" && def.kind != "linear" && def.kind != "brute-force") {
    throw ProblemParseError("unknown oracle kind '" + def.kind +
                            "' (expected crr-put, linear, brute-force)");
  }
  def.tolerance = number(require(obj, "tolerance", "oracle"), "oracle.tolerance");
  if (def.kind == "crr-put") {
    read_put_params(obj, "oracle", def.strike, def.spot, def.rate, def.sigma);
  }
  return def;
}

int time_index_of(const TimeGrid& grid, double t) {
  const int i = static_cast<int>(std::lround(t / grid.dt));
  return std::clamp(i, 0, grid.steps);
}

int up_index_of(const TimeGrid& grid, int i, double w) {
  const int j = static_cast<int>(std::lround((w / grid.sqrt_dt + i) / 2.0));
  return std::clamp(j, 0, i);
}

bool uses_table(const ProblemDocument& doc) {
  return doc.driver.kind == "custom-table" || doc.terminal.kind == "custom-table" ||
         doc.obstacle.kind == "custom-table";
}

void check_table_shape(const std::vector<std::vector<double>>& values, int steps,
                       const char* what) {
  if (values.size() != static_cast<std::size_t>(steps) + 1) {
    throw ProblemParseError(std::string(what) +
                            ".values must hold N+1 slices matching grid.N");
  }
  for (int i = 0; i <= steps; ++i) {
    if (values[i].size() != static_cast<std::size_t>(i) + 1) {
      throw ProblemParseError(std::string(what) + ".values slice " +
                              std::to_string(i) + " must hold i+1 entries");
    }
  }
}

}  // namespace

ProblemDocument parse_problem_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProblemParseError(e.what());  // nlohmann message carries the position
  }
  if (!doc.is_object()) {
    throw ProblemParseError("problem document must be a JSON object");
  }

  ProblemDocument out;
  const json& grid = require(doc, "grid", "problem");
  out.horizon = number(require(grid, "T", "grid"), "grid.T");
  out.steps = integer(require(grid, "N", "grid"), "grid.N");
  out.beta = number(require(doc, "beta", "problem"), "beta");
  out.epsilon = number(require(doc, "epsilon", "problem"), "epsilon");
  out.driver = parse_driver(require(doc, "driver", "problem"));
  out.terminal = parse_terminal(require(doc, "terminal", "problem"));
  out.obstacle = parse_obstacle(require(doc, "obstacle", "problem"));
  if (doc.contains("oracle")) out.oracle = parse_oracle(doc.at("oracle"));
  return out;
}

ProblemDocument load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ProblemParseError("cannot open problem file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem_json(text.str());
}

ProblemSpec build_problem(const ProblemDocument& doc,
                          const ProblemOverrides& overrides) {
  if (overrides.steps && uses_table(doc)) {
    throw ProblemParseError("steps override is incompatible with custom-table data");
  }
  const int steps = overrides.steps.value_or(doc.steps);

  ProblemSpec problem;
  try {
    problem.grid = build_time_grid(doc.horizon, steps);
  } catch (const std::invalid_argument& e) {
    throw ProblemParseError(std::string("grid: ") + e.what());
  }
  problem.beta = overrides.beta.value_or(doc.beta);
  problem.driver.epsilon = doc.epsilon;
  const TimeGrid grid = problem.grid;

  const auto& d = doc.driver;
  PolyOrConst default_mu;
  PolyOrConst default_gamma;
  if (d.kind == "linear") {
    problem.driver.f = [r = d.r, theta = d.theta](double t, double, double y,
                                                  double z) {
      return -(r(t) * y + theta(t) * z);
    };
    default_mu.coeffs = d.r.coeffs;  // |r|, |theta| taken pointwise below
    default_gamma.coeffs = d.theta.coeffs;
  } else if (d.kind == "constant") {
    problem.driver.f = [c = d.value](double, double, double, double) { return c; };
  } else if (d.kind == "zero") {
    problem.driver.f = [](double, double, double, double) { return 0.0; };
  } else {  // custom-table
    check_table_shape(d.values, grid.steps, "driver");
    problem.driver.f = [values = d.values, grid](double t, double w, double,
                                                 double) {
      const int i = time_index_of(grid, t);
      return values[i][up_index_of(grid, i, w)];
    };
  }

  const auto bind_coefficient = [](const PolyOrConst& p) {
    return p.is_constant()
               ? CoefficientProcess::constant(std::fabs(p.coeffs[0]))
               : CoefficientProcess::of_time(
                     [p](double t) { return std::fabs(p(t)); });
  };
  problem.driver.mu = bind_coefficient(d.mu.value_or(default_mu));
  problem.driver.gamma = bind_coefficient(d.gamma.value_or(default_gamma));

  const auto& term = doc.terminal;
  const double horizon = grid.horizon;
  if (term.kind == "constant") {
    problem.terminal = [c = term.value](double) { return c; };
  } else if (term.kind == "identity") {
    problem.terminal = [](double w) { return w; };
  } else if (term.kind == "put") {
    const double drift = term.rate - 0.5 * term.sigma * term.sigma;
    problem.terminal = [term, drift, horizon](double w) {
      const double x = term.spot * std::exp(drift * horizon + term.sigma * w);
      return std::max(term.strike - x, 0.0);
    };
  } else {  // custom-table
    if (term.values.size() != static_cast<std::size_t>(grid.steps) + 1) {
      throw ProblemParseError("terminal.values must hold N+1 entries");
    }
    problem.terminal = [values = term.values, grid](double w) {
      return values[up_index_of(grid, grid.steps, w)];
    };
  }

  const auto& obs = doc.obstacle;
  if (obs.kind == "constant") {
    problem.obstacle = [c = obs.value](double, double) { return c; };
  } else if (obs.kind == "affine-time") {
    problem.obstacle = [obs](double t, double) { return obs.c0 + obs.c1 * t; };
  } else if (obs.kind == "put") {
    const double drift = obs.rate - 0.5 * obs.sigma * obs.sigma;
    problem.obstacle = [obs, drift](double t, double w) {
      const double x = obs.spot * std::exp(drift * t + obs.sigma * w);
      return std::max(obs.strike - x, 0.0);
    };
  } else {  // custom-table
    check_table_shape(obs.values, grid.steps, "obstacle");
    problem.obstacle = [values = obs.values, grid](double t, double w) {
      const int i = time_index_of(grid, t);
      return values[i][up_index_of(grid, i, w)];
    };
  }

  return problem;
}

}  // namespace rbsde
