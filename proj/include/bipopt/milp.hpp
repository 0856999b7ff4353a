#pragma once

#include "bipopt/lp.hpp"

namespace bipopt {

enum class MilpStatus { Optimal, Infeasible, NodeLimit, TimeLimit };

const char* to_string(MilpStatus s);

/// LP plus binary markings. SOS1 groups mirror the one-hot selection rows:
/// they are branching metadata only, the assignment row itself must be part
/// of the LP.
struct MilpProblem {
  LpProblem lp;
  std::vector<int> binaries;
  std::vector<std::vector<int>> sos1_groups;

  /// Binary indices must be valid columns with bounds inside [0,1]; group
  /// members must be binaries. Throws std::invalid_argument otherwise.
  void validate() const;
};

struct SolveLimits {
  long max_nodes = 1000000;
  double time_limit_s = 0.0;  // 0 disables
  double mip_gap = 1e-6;      // |obj - bound| <= gap * max(1, |obj|)
  double int_tol = 1e-6;
  SolverTolerances lp;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> primal;
  double objective = 0.0;
  double best_bound = 0.0;
  long nodes = 0;
  double wall_time_s = 0.0;
  /// Global bound after each processed node; non-improving by construction.
  std::vector<double> bound_trace;
};

/// Best-bound-first branch and bound over the binary variables, branching on
/// the most fractional member of the most ambiguous SOS1 group. Deterministic
/// given fixed limits: ties break by node creation order.
MilpSolution solve_milp(const MilpProblem& problem, const SolveLimits& limits = {});

}  // namespace bipopt
