#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bipopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus s);

/// One constraint row, stored sparse as parallel (column, coefficient) lists.
struct LpRow {
  std::vector<int> cols;
  std::vector<double> vals;
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

/// Linear program in canonical form: optimize c'x subject to rows and
/// per-variable bounds. Bounds may be -inf / +inf.
struct LpProblem {
  Sense sense = Sense::Maximize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> var_names;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Adds a variable and returns its column index.
  int add_variable(double lb, double ub, double obj, std::string name = "");

  void add_row(std::vector<int> cols, std::vector<double> vals, Relation rel,
               double rhs, std::string name = "");

  /// Throws std::invalid_argument on non-finite data, bad indices or
  /// crossed bounds. Called by solve_lp before any pivoting.
  void validate() const;
};

struct SolverTolerances {
  double feas_tol = 1e-8;
  double duality_tol = 1e-7;
  double pivot_tol = 1e-9;
  /// 0 means the default cap of 50*(rows+cols) pivots.
  long max_iterations = 0;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_streak = 20;
  /// Wall-clock cap in seconds; 0 disables. Exceeding it yields
  /// IterationLimit (the LP-level resource status).
  double time_limit_s = 0.0;
  /// Rows above this are refused up front (dense basis-inverse memory).
  int max_rows = 50000;
};

/// Dual values follow the problem's own sense: dual[i] is the marginal
/// change of the optimal objective per unit increase of row i's rhs.
/// Maximize: <= rows have dual >= 0, >= rows dual <= 0, = rows free.
/// Minimize: signs are mirrored.
struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> primal;
  std::vector<double> dual;
  std::vector<double> reduced_cost;
  double objective = 0.0;
  long iterations = 0;
};

/// Revised simplex (Dantzig pricing, Bland fallback on degeneracy streaks).
/// Deterministic: identical input yields identical output.
LpSolution solve_lp(const LpProblem& problem, const SolverTolerances& tol = {});

struct ResidualReport {
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementary_slackness = 0.0;
  double duality_gap = 0.0;

  double max_residual() const;
};

/// Recomputes feasibility, complementary-slackness and duality-gap residuals
/// of `solution` against `problem` from scratch.
ResidualReport evaluate_residuals(const LpProblem& problem,
                                  const LpSolution& solution);

/// Writes the problem in a fixed plain-text format for cross-checking with
/// external solvers. Grammar (one item per line, whitespace separated):
///
///   Maximize | Minimize
///    obj: <coef> <var> [+ <coef> <var> ...]
///   Subject To
///    <row>: <coef> <var> ... {<=,=,>=} <rhs>
///   Bounds
///    <lb> <= <var> <= <ub>        (lb/ub may be -inf / inf)
///   End
///
/// Variables with no listed bound default to [0, inf).
void write_lp_text(const LpProblem& problem, std::ostream& out);

}  // namespace bipopt
