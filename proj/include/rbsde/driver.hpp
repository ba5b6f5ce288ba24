#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rbsde/norms.hpp"
#include "rbsde/paths.hpp"
#include "rbsde/time_grid.hpp"

namespace rbsde {

/// A nonnegative adapted coefficient evaluated at (t, Brownian state).
/// Deterministic coefficients (value ignores the state) unlock exact
/// weighted norms; the flag is set by construction, never inferred.
class CoefficientProcess {
 public:
  CoefficientProcess() : CoefficientProcess(constant(0.0)) {}

  static CoefficientProcess constant(double value) {
    return CoefficientProcess([value](double, double) { return value; }, true);
  }
  static CoefficientProcess of_time(std::function<double(double)> f) {
    return CoefficientProcess(
        [f = std::move(f)](double t, double) { return f(t); }, true);
  }
  static CoefficientProcess of_state(std::function<double(double, double)> f) {
    return CoefficientProcess(std::move(f), false);
  }

  double operator()(double t, double w) const { return eval_(t, w); }
  bool deterministic() const { return deterministic_; }

 private:
  CoefficientProcess(std::function<double(double, double)> eval, bool det)
      : eval_(std::move(eval)), deterministic_(det) {}

  std::function<double(double, double)> eval_;
  bool deterministic_;
};

/// Driver f(t, w, y, z) with its stochastic Lipschitz data:
/// |f(t,w,y₁,z₁) − f(t,w,y₂,z₂)| ≤ μ(t,w)|y₁−y₂| + γ(t,w)|z₁−z₂|,
/// and the floor ε of a² := μ + γ².
struct DriverSpec {
  std::function<double(double t, double w, double y, double z)> f;
  CoefficientProcess mu;
  CoefficientProcess gamma;
  double epsilon = 0.0;

  double a_squared(double t, double w) const {
    const double g = gamma(t, w);
    return mu(t, w) + g * g;
  }
  bool deterministic_coefficients() const {
    return mu.deterministic() && gamma.deterministic();
  }
};

/// Full problem data: terminal value ξ(w at T), obstacle S(t, w), driver,
/// and the weight parameter β.
struct ProblemSpec {
  TimeGrid grid;
  DriverSpec driver;
  std::function<double(double w)> terminal;
  std::function<double(double t, double w)> obstacle;
  double beta = 0.0;
};

/// a² baked onto the lattice, with the determinism flag carried over.
WeightField weight_field(const DriverSpec& driver, const TimeGrid& grid);

/// Cumulative weight A along a path, straight from the driver coefficients:
/// A[0] = 0, A[i+1] = A[i] + a²(t_i, w_i)·dt (left-endpoint rule).
std::vector<double> cumulative_A(const LatticePath& path, const DriverSpec& driver,
                                 const TimeGrid& grid);

/// The problem with (ξ, f, S) jointly scaled by λ > 0: f is conjugated so
/// that the exact solution scales linearly while μ, γ, ε, β are unchanged.
ProblemSpec scale_problem(const ProblemSpec& problem, double lambda);

}  // namespace rbsde
