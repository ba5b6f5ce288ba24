#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbsde/driver.hpp"
#include "rbsde/norms.hpp"
#include "rbsde/paths.hpp"

namespace rbsde {

/// One validated condition. A failed blocking entry must stop the solve;
/// failed non-blocking entries are warnings.
struct CheckEntry {
  std::string name;
  bool passed = true;
  bool blocking = false;
  double magnitude = 0.0;  // worst violation (0 when passed)
  int node_i = -1;         // location of the worst case, -1 when not node-bound
  int node_j = -1;
  std::string detail;
};

struct AssumptionReport {
  std::vector<CheckEntry> entries;
  NormEstimate xi_norm;        // E[e^{βA(T)} ξ²]
  NormEstimate f0_norm;        // E[Σ e^{βA} (f(·,0,0)/a)² dt]
  NormEstimate obstacle_norm;  // E[sup_t e^{2βA} (S_t⁺)²]

  bool ok() const {
    for (const auto& e : entries) {
      if (e.blocking && !e.passed) return false;
    }
    return true;
  }
  const CheckEntry* find(const std::string& name) const {
    for (const auto& e : entries) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

struct ValidationConfig {
  std::uint64_t probe_seed = 20260801;
  int probe_count = 256;
  double probe_box = 10.0;   // half width of the (y, z) probe cube
  double probe_tol = 1e-12;
  double terminal_tol = 1e-12;
  std::size_t norm_paths = 10000;
  std::uint64_t norm_seed = 424242;
};

/// Randomized Lipschitz probe: samples nodes and (y, z) pairs inside the box
/// and flags any tuple violating the stated bound beyond probe_tol.
/// Advisory only (never blocking).
CheckEntry check_h1_lipschitz(const DriverSpec& driver, const TimeGrid& grid,
                              std::uint64_t probe_seed, int probe_count,
                              double box = 10.0, double tol = 1e-12);

/// Exhaustive node scan of a² against the floor ε. Blocking on failure;
/// the entry records the argmin node.
CheckEntry check_h2_epsilon(const DriverSpec& driver, const TimeGrid& grid);

/// The three data norms plus terminal dominance S(T, ·) ≤ ξ. Returns a
/// partial report holding entries H3, H4, H5-obstacle-norm (advisory) and
/// H5-terminal (blocking), with the norm fields filled.
AssumptionReport check_h3_h4_h5(const ProblemSpec& problem, const PathSample& paths,
                                double terminal_tol = 1e-12);

/// Full gate: parameter sanity, coefficient sign, data finiteness, then
/// (H1), (H2) and the (H3)–(H5) bundle. Deterministic given the config.
AssumptionReport validate_problem(const ProblemSpec& problem,
                                  const ValidationConfig& config = {});

}  // namespace rbsde
