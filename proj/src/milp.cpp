#include "bipopt/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace bipopt {

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::NodeLimit: return "node_limit";
    case MilpStatus::TimeLimit: return "time_limit";
  }
  return "unknown";
}

void MilpProblem::validate() const {
  lp.validate();
  std::unordered_set<int> binset;
  for (int j : binaries) {
    if (j < 0 || j >= lp.num_vars())
      throw std::invalid_argument("milp: binary index out of range");
    if (lp.lower[j] < -1e-12 || lp.upper[j] > 1.0 + 1e-12)
      throw std::invalid_argument("milp: binary column " + std::to_string(j) +
                                  " has bounds outside [0,1]");
    binset.insert(j);
  }
  for (const auto& g : sos1_groups)
    for (int j : g)
      if (!binset.count(j))
        throw std::invalid_argument("milp: SOS1 member is not a binary variable");
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  long id = 0;
  int parent = -1;
  double estimate = 0.0;                   // parent LP bound, in max-sense
  std::vector<std::pair<int, double>> fixes;
};

struct QueueEntry {
  double estimate;
  long id;
  int index;
  bool operator<(const QueueEntry& o) const {
    // std::priority_queue is a max-heap: higher estimate first, then FIFO.
    if (estimate != o.estimate) return estimate < o.estimate;
    return id > o.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& p, const SolveLimits& lim)
      : p_(p), lim_(lim), start_(Clock::now()) {
    maximize_ = p.lp.sense == Sense::Maximize;
    group_of_.assign(p.lp.num_vars(), -1);
    for (size_t g = 0; g < p.sos1_groups.size(); ++g)
      for (int j : p.sos1_groups[g]) group_of_[j] = static_cast<int>(g);
  }

  MilpSolution run() {
    rounding_heuristic();
    Node root;
    root.id = next_id_++;
    root.estimate = maximize_ ? kInf : -kInf;
    nodes_.push_back(root);
    open_.push({to_key(root.estimate), root.id, 0});

    while (!open_.empty()) {
      if (out_of_time()) return finish(MilpStatus::TimeLimit);
      if (processed_ >= lim_.max_nodes) return finish(MilpStatus::NodeLimit);
      const QueueEntry top = open_.top();
      open_.pop();
      if (has_incumbent_ && !improves(key_to_obj(top.estimate))) continue;
      process(top.index);
      bound_trace_.push_back(global_bound());
      if (gap_closed()) return finish(MilpStatus::Optimal);
    }
    if (!has_incumbent_) return finish(MilpStatus::Infeasible);
    // Dropped unresolved nodes forfeit the optimality certificate.
    return finish(lost_exactness_ ? MilpStatus::NodeLimit : MilpStatus::Optimal);
  }

 private:
  const MilpProblem& p_;
  SolveLimits lim_;
  Clock::time_point start_;
  bool maximize_ = true;

  std::vector<Node> nodes_;
  std::priority_queue<QueueEntry> open_;
  long next_id_ = 0;
  long processed_ = 0;
  std::vector<int> group_of_;

  bool has_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = 0.0;
  bool lost_exactness_ = false;
  std::vector<double> bound_trace_;

  // Keys are stored in max-sense so one heap works for both senses.
  double to_key(double obj) const { return maximize_ ? obj : -obj; }
  double key_to_obj(double key) const { return maximize_ ? key : -key; }

  bool improves(double obj) const {
    if (!has_incumbent_) return true;
    return maximize_ ? obj > incumbent_obj_ + 1e-12 : obj < incumbent_obj_ - 1e-12;
  }

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  bool out_of_time() const {
    return lim_.time_limit_s > 0 && elapsed() > lim_.time_limit_s;
  }

  void materialize_bounds(int index, LpProblem& lp) const {
    // Walk the ancestor chain; nearest fix wins, so write only once per var.
    std::vector<std::pair<int, double>> todo;
    for (int cur = index; cur >= 0; cur = nodes_[cur].parent)
      for (const auto& f : nodes_[cur].fixes) todo.push_back(f);
    std::vector<uint8_t> seen(lp.num_vars(), 0);
    for (const auto& [var, val] : todo) {
      if (seen[var]) continue;
      seen[var] = 1;
      lp.lower[var] = val;
      lp.upper[var] = val;
    }
  }

  LpSolution solve_node_lp(int index) {
    LpProblem lp = p_.lp;
    materialize_bounds(index, lp);
    SolverTolerances tol = lim_.lp;
    if (lim_.time_limit_s > 0) {
      const double remain = lim_.time_limit_s - elapsed();
      tol.time_limit_s = std::max(remain, 0.01);
    }
    return solve_lp(lp, tol);
  }

  // Fractionality of column j in x: distance into (0,1).
  static double frac(double v) { return std::min(v, 1.0 - v); }

  void process(int index) {
    ++processed_;
    const LpSolution rel = solve_node_lp(index);
    if (rel.status == LpStatus::Infeasible) return;
    if (rel.status == LpStatus::Unbounded)
      throw std::runtime_error("milp: node relaxation is unbounded (model bug)");
    if (rel.status == LpStatus::IterationLimit) {
      // Unresolved relaxation: keep exactness by branching blindly on the
      // first unfixed binary with the parent estimate.
      if (out_of_time()) return;  // the time-limit path reports upstream
      branch_blind(index);
      return;
    }

    const double bound = rel.objective;
    nodes_[index].estimate = bound;
    if (has_incumbent_ && !improves(bound)) return;

    // Integral?
    int branch_var = pick_branch_var(rel.primal);
    if (branch_var < 0) {
      if (improves(bound)) {
        incumbent_ = rel.primal;
        incumbent_obj_ = bound;
        has_incumbent_ = true;
      }
      return;
    }
    make_children(index, branch_var, bound);
  }

  // Returns -1 when every binary is integral within int_tol. Otherwise the
  // most fractional binary inside the most ambiguous SOS1 group, or the most
  // fractional free-standing binary when no group is fractional.
  int pick_branch_var(const std::vector<double>& x) const {
    int best_group = -1;
    double best_ambiguity = -1.0;
    for (size_t g = 0; g < p_.sos1_groups.size(); ++g) {
      double maxv = 0.0;
      bool fractional = false;
      for (int j : p_.sos1_groups[g]) {
        maxv = std::max(maxv, x[j]);
        if (frac(x[j]) > lim_.int_tol) fractional = true;
      }
      if (!fractional) continue;
      const double ambiguity = 1.0 - maxv;
      if (ambiguity > best_ambiguity + 1e-15) {
        best_ambiguity = ambiguity;
        best_group = static_cast<int>(g);
      }
    }
    if (best_group >= 0) {
      int pick = -1;
      double best_frac = lim_.int_tol;
      for (int j : p_.sos1_groups[best_group]) {
        if (frac(x[j]) > best_frac) {
          best_frac = frac(x[j]);
          pick = j;
        }
      }
      return pick;
    }
    int pick = -1;
    double best_frac = lim_.int_tol;
    for (int j : p_.binaries) {
      if (frac(x[j]) > best_frac) {
        best_frac = frac(x[j]);
        pick = j;
      }
    }
    return pick;
  }

  void make_children(int index, int var, double bound) {
    Node up;
    up.parent = index;
    up.estimate = bound;
    up.fixes.push_back({var, 1.0});
    if (group_of_[var] >= 0)
      for (int j : p_.sos1_groups[group_of_[var]])
        if (j != var) up.fixes.push_back({j, 0.0});

    Node down;
    down.parent = index;
    down.estimate = bound;
    down.fixes.push_back({var, 0.0});

    for (Node* child : {&up, &down}) {
      child->id = next_id_++;
      nodes_.push_back(*child);
      open_.push({to_key(child->estimate), child->id,
                  static_cast<int>(nodes_.size()) - 1});
    }
  }

  void branch_blind(int index) {
    std::vector<uint8_t> is_fixed(p_.lp.num_vars(), 0);
    for (int cur = index; cur >= 0; cur = nodes_[cur].parent)
      for (const auto& f : nodes_[cur].fixes) is_fixed[f.first] = 1;
    for (int j : p_.binaries) {
      if (!is_fixed[j]) {
        make_children(index, j, nodes_[index].estimate);
        return;
      }
    }
    lost_exactness_ = true;  // fully fixed yet unresolved; node dropped
  }

  // Round the root relaxation into an initial incumbent: argmax member per
  // SOS1 group, nearest bound elsewhere, then let an LP place the rest.
  void rounding_heuristic() {
    const LpSolution root = solve_node_lp(-1);  // -1: no fixes applied
    if (root.status != LpStatus::Optimal) return;
    LpProblem lp = p_.lp;
    std::vector<uint8_t> done(lp.num_vars(), 0);
    for (const auto& g : p_.sos1_groups) {
      int pick = g.front();
      for (int j : g)
        if (root.primal[j] > root.primal[pick]) pick = j;
      for (int j : g) {
        lp.lower[j] = lp.upper[j] = (j == pick ? 1.0 : 0.0);
        done[j] = 1;
      }
    }
    for (int j : p_.binaries) {
      if (done[j]) continue;
      const double v = root.primal[j] >= 0.5 ? 1.0 : 0.0;
      lp.lower[j] = lp.upper[j] = v;
    }
    SolverTolerances tol = lim_.lp;
    if (lim_.time_limit_s > 0)
      tol.time_limit_s = std::max(lim_.time_limit_s - elapsed(), 0.01);
    const LpSolution fixed_lp = solve_lp(lp, tol);
    if (fixed_lp.status == LpStatus::Optimal) {
      incumbent_ = fixed_lp.primal;
      incumbent_obj_ = fixed_lp.objective;
      has_incumbent_ = true;
    }
  }

  bool gap_closed() const {
    if (!has_incumbent_) return false;
    const double bound = global_bound();
    return std::abs(incumbent_obj_ - bound) <=
           lim_.mip_gap * std::max(1.0, std::abs(incumbent_obj_));
  }

  double global_bound() const {
    double best = has_incumbent_ ? incumbent_obj_
                                 : (maximize_ ? -kInf : kInf);
    if (!open_.empty()) {
      const double top = key_to_obj(open_.top().estimate);
      best = maximize_ ? std::max(best, top) : std::min(best, top);
    }
    return best;
  }

  MilpSolution finish(MilpStatus st) {
    MilpSolution out;
    out.status = st;
    out.nodes = processed_;
    out.wall_time_s = elapsed();
    out.has_incumbent = has_incumbent_;
    if (has_incumbent_) {
      out.primal = incumbent_;
      out.objective = incumbent_obj_;
    }
    out.best_bound = st == MilpStatus::Optimal ? incumbent_obj_ : global_bound();
    if (st == MilpStatus::Infeasible) out.best_bound = 0.0;
    out.bound_trace = bound_trace_;
    return out;
  }
};

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const SolveLimits& limits) {
  problem.validate();
  BranchAndBound solver(problem, limits);
  return solver.run();
}

}  // namespace bipopt
