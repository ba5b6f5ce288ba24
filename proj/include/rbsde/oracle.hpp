#pragma once

#include <functional>

#include "rbsde/driver.hpp"
#include "rbsde/time_grid.hpp"

namespace rbsde {

/// Reference pricers used only for acceptance testing. The tree pricers are
/// deliberately self-contained: they share no stepping code with the solver.

struct AmericanPutSpec {
  double spot = 0.0;
  double strike = 0.0;
  double rate = 0.0;
  double sigma = 0.0;
  double horizon = 0.0;
  int steps = 0;
};

/// Discounted mean terminal value exp(−∫r)·x̄ for the linear dynamics with
/// zero risk premium, using the same left-endpoint quadrature as the weight.
double linear_bsde_value(const std::function<double(double)>& rate, double xi_mean,
                         const TimeGrid& grid);

/// Cox–Ross–Rubinstein American put: u = e^{σ√dt}, d = 1/u,
/// q = (e^{r·dt} − d)/(u − d), backward induction with early exercise.
/// Rejects invalid specs and q outside [0, 1].
double crr_american_put(const AmericanPutSpec& spec);

/// Same tree without the exercise option (early-exercise premium checks).
double crr_european_put(const AmericanPutSpec& spec);

/// The put as a reflected problem: X_t = S0·exp((r − σ²/2)t + σw),
/// obstacle (K − X_t)⁺, terminal (K − X_T)⁺, driver f = −r·y with μ = r,
/// γ = 0, ε = r.
ProblemSpec rbsde_american_put_problem(const AmericanPutSpec& spec);

}  // namespace rbsde
