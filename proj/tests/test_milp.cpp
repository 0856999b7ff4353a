#include <doctest.h>

#include <cmath>
#include <random>

#include "bipopt/milp.hpp"

using namespace bipopt;

namespace {

// Exhaustive oracle: tries every 0/1 assignment of the binaries, completing
// each with an LP over the remaining variables.
double enumerate_milp(const MilpProblem& p) {
  const int nb = static_cast<int>(p.binaries.size());
  REQUIRE(nb <= 16);
  const bool maximize = p.lp.sense == Sense::Maximize;
  double best = maximize ? -kInf : kInf;
  for (int mask = 0; mask < (1 << nb); ++mask) {
    LpProblem lp = p.lp;
    for (int k = 0; k < nb; ++k) {
      const double v = (mask >> k) & 1 ? 1.0 : 0.0;
      lp.lower[p.binaries[k]] = v;
      lp.upper[p.binaries[k]] = v;
    }
    const LpSolution s = solve_lp(lp);
    if (s.status != LpStatus::Optimal) continue;
    best = maximize ? std::max(best, s.objective) : std::min(best, s.objective);
  }
  return best;
}

MilpProblem knapsack3() {
  // values (4,5,6), weights (2,3,4), capacity 5
  MilpProblem p;
  p.lp.sense = Sense::Maximize;
  const double values[] = {4, 5, 6};
  for (int j = 0; j < 3; ++j) p.lp.add_variable(0, 1, values[j]);
  p.lp.add_row({0, 1, 2}, {2, 3, 4}, Relation::LessEqual, 5);
  p.binaries = {0, 1, 2};
  return p;
}

}  // namespace

TEST_CASE("two-point enumeration") {
  // max 3a + 2b, a + b <= 1, a,b binary
  MilpProblem p;
  p.lp.sense = Sense::Maximize;
  p.lp.add_variable(0, 1, 3);
  p.lp.add_variable(0, 1, 2);
  p.lp.add_row({0, 1}, {1, 1}, Relation::LessEqual, 1);
  p.binaries = {0, 1};
  const MilpSolution s = solve_milp(p);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(s.primal[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.primal[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("one-hot group forces a single pick") {
  MilpProblem p;
  p.lp.sense = Sense::Maximize;
  p.lp.add_variable(0, 1, 1);
  p.lp.add_variable(0, 1, 1);
  p.lp.add_row({0, 1}, {1, 1}, Relation::Equal, 1);
  p.binaries = {0, 1};
  p.sos1_groups = {{0, 1}};
  const MilpSolution s = solve_milp(p);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("three-item knapsack against subset enumeration") {
  const MilpProblem p = knapsack3();
  const double oracle = enumerate_milp(p);
  CHECK(oracle == doctest::Approx(9.0).epsilon(1e-12));  // items 1 and 2
  const MilpSolution s = solve_milp(p);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(s.primal[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.primal[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.primal[2] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("infeasible binaries") {
  MilpProblem p;
  p.lp.sense = Sense::Maximize;
  p.lp.add_variable(0, 1, 1);
  p.lp.add_row({0}, {2}, Relation::Equal, 1);  // x = 0.5 required
  p.binaries = {0};
  CHECK(solve_milp(p).status == MilpStatus::Infeasible);
}

TEST_CASE("node limit carries the incumbent") {
  MilpProblem p = knapsack3();
  SolveLimits lim;
  lim.max_nodes = 1;
  const MilpSolution s = solve_milp(p, lim);
  if (s.status == MilpStatus::NodeLimit) {
    CHECK(s.has_incumbent);  // LP rounding provides one up front
    CHECK(s.best_bound >= s.objective - 1e-9);
  } else {
    CHECK(s.status == MilpStatus::Optimal);
  }
}

TEST_CASE("validation rejects bad binaries") {
  MilpProblem p;
  p.lp.add_variable(0, 2, 1);  // bounds exceed [0,1]
  p.binaries = {0};
  CHECK_THROWS_AS(solve_milp(p), std::invalid_argument);

  MilpProblem q;
  q.lp.add_variable(0, 1, 1);
  q.binaries = {0};
  q.sos1_groups = {{0, 1}};  // group member is not a variable
  CHECK_THROWS_AS(solve_milp(q), std::invalid_argument);
}

TEST_CASE("oracle equivalence and bound monotonicity on random MILPs") {
  std::mt19937_64 rng(987654321);
  auto unif = [&](double a, double b) {
    return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1p-53);
  };
  for (int trial = 0; trial < 40; ++trial) {
    MilpProblem p;
    p.lp.sense = trial % 2 == 0 ? Sense::Maximize : Sense::Minimize;
    const int nb = 2 + static_cast<int>(rng() % 9);  // <= 12 per the contract
    const int nc = static_cast<int>(rng() % 3);
    for (int j = 0; j < nb; ++j) p.lp.add_variable(0, 1, unif(-4, 4));
    for (int j = 0; j < nc; ++j) p.lp.add_variable(0, 2, unif(-2, 2));
    p.binaries.resize(nb);
    for (int j = 0; j < nb; ++j) p.binaries[j] = j;
    // A couple of knapsack-style rows keep most instances feasible.
    const int m = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < m; ++i) {
      std::vector<int> cols;
      std::vector<double> vals;
      for (int j = 0; j < nb + nc; ++j) {
        if (rng() % 2 == 0) continue;
        cols.push_back(j);
        vals.push_back(unif(0, 2));
      }
      if (cols.empty()) continue;
      p.lp.add_row(cols, vals, Relation::LessEqual, unif(1, 4));
    }
    // Sometimes mark a one-hot pair.
    if (nb >= 2 && rng() % 2 == 0) {
      p.lp.add_row({0, 1}, {1, 1}, Relation::Equal, 1);
      p.sos1_groups = {{0, 1}};
    }

    const double oracle = enumerate_milp(p);
    const MilpSolution s = solve_milp(p);
    CAPTURE(trial);
    if (!std::isfinite(oracle)) {
      CHECK(s.status == MilpStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == MilpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-7));
    // Bound trace never moves away from the incumbent.
    const bool maximize = p.lp.sense == Sense::Maximize;
    for (size_t k = 1; k < s.bound_trace.size(); ++k) {
      if (maximize)
        CHECK(s.bound_trace[k] <= s.bound_trace[k - 1] + 1e-9);
      else
        CHECK(s.bound_trace[k] >= s.bound_trace[k - 1] - 1e-9);
    }
  }
}
