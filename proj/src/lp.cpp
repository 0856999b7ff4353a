#include "bipopt/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>

namespace bipopt {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

int LpProblem::add_variable(double lb, double ub, double obj, std::string name) {
  objective.push_back(obj);
  lower.push_back(lb);
  upper.push_back(ub);
  var_names.push_back(std::move(name));
  return static_cast<int>(objective.size()) - 1;
}

void LpProblem::add_row(std::vector<int> cols, std::vector<double> vals,
                        Relation rel, double rhs, std::string name) {
  LpRow row;
  row.cols = std::move(cols);
  row.vals = std::move(vals);
  row.rel = rel;
  row.rhs = rhs;
  row.name = std::move(name);
  rows.push_back(std::move(row));
}

void LpProblem::validate() const {
  const int n = num_vars();
  if (lower.size() != objective.size() || upper.size() != objective.size())
    throw std::invalid_argument("lp: bound vectors do not match variable count");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(objective[j]) || std::isinf(objective[j]))
      throw std::invalid_argument("lp: non-finite objective coefficient at column " +
                                  std::to_string(j));
    if (std::isnan(lower[j]) || std::isnan(upper[j]))
      throw std::invalid_argument("lp: NaN bound at column " + std::to_string(j));
    if (lower[j] > upper[j])
      throw std::invalid_argument("lp: crossed bounds at column " + std::to_string(j));
  }
  for (int i = 0; i < num_rows(); ++i) {
    const LpRow& r = rows[i];
    if (r.cols.size() != r.vals.size())
      throw std::invalid_argument("lp: row " + std::to_string(i) +
                                  " has mismatched index/value lists");
    if (!std::isfinite(r.rhs))
      throw std::invalid_argument("lp: non-finite rhs at row " + std::to_string(i));
    for (size_t k = 0; k < r.cols.size(); ++k) {
      if (r.cols[k] < 0 || r.cols[k] >= n)
        throw std::invalid_argument("lp: row " + std::to_string(i) +
                                    " references invalid column " +
                                    std::to_string(r.cols[k]));
      if (!std::isfinite(r.vals[k]))
        throw std::invalid_argument("lp: non-finite coefficient in row " +
                                    std::to_string(i));
    }
  }
}

namespace {

using Clock = std::chrono::steady_clock;

// Bounded-variable revised simplex with a dense basis inverse.
// Internal form: minimize cost'v over [A | I] v = b with per-column bounds;
// slack column i has bounds chosen from the row relation. Rows whose slack
// cannot absorb the initial residual get a +/-1 artificial column driven to
// zero in phase 1.
class Simplex {
 public:
  Simplex(const LpProblem& p, const SolverTolerances& tol)
      : p_(p), tol_(tol), start_(Clock::now()) {
    m_ = p.num_rows();
    n_ = p.num_vars();
    if (m_ > tol.max_rows)
      throw std::length_error("lp: " + std::to_string(m_) +
                              " rows exceeds the dense-basis cap of " +
                              std::to_string(tol.max_rows));
    max_iter_ = tol.max_iterations > 0
                    ? tol.max_iterations
                    : 50L * (static_cast<long>(m_) + static_cast<long>(n_));
    build();
  }

  LpSolution run() {
    LpSolution out;
    // Phase 1: drive artificial infeasibility to zero.
    if (num_art_ > 0) {
      phase_ = 1;
      const Outcome o = iterate();
      if (o == Outcome::Limit) return finish_limit(out);
      double infeas = 0.0;
      for (int c = art_begin_; c < total_; ++c) infeas += value_[c];
      if (infeas > tol_.feas_tol * (1.0 + bnorm_)) {
        out.status = LpStatus::Infeasible;
        out.iterations = iter_;
        out.primal.assign(value_.begin(), value_.begin() + n_);
        out.dual.assign(m_, 0.0);
        out.reduced_cost.assign(n_, 0.0);
        return out;
      }
      drive_out_artificials();
      for (int c = art_begin_; c < total_; ++c) {
        upper_[c] = 0.0;
        value_[c] = 0.0;
      }
    }
    phase_ = 2;
    for (int round = 0; round < 3; ++round) {
      const Outcome o = iterate();
      if (o == Outcome::Limit) return finish_limit(out);
      if (o == Outcome::Unbounded) {
        out.status = LpStatus::Unbounded;
        out.iterations = iter_;
        out.primal.assign(value_.begin(), value_.begin() + n_);
        out.dual.assign(m_, 0.0);
        out.reduced_cost.assign(n_, 0.0);
        return out;
      }
      if (certify()) return extract(out, LpStatus::Optimal);
      // Drifted basis inverse: refactorize and re-optimize.
      refactorize();
    }
    return extract(out, LpStatus::IterationLimit);
  }

 private:
  enum class Outcome { Converged, Unbounded, Limit };

  const LpProblem& p_;
  SolverTolerances tol_;
  Clock::time_point start_;
  int m_ = 0, n_ = 0;
  int phase_ = 2;
  long iter_ = 0;
  long max_iter_ = 0;
  int degen_streak_ = 0;
  bool bland_ = false;

  // Internal columns: [0,n) structural, [n, n+m) slacks, [art_begin_, total_)
  // artificials. Artificial k sits in row art_row_[k] with coefficient
  // art_sign_[k].
  int art_begin_ = 0, total_ = 0, num_art_ = 0;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;

  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural only
  std::vector<double> cost_;    // minimize; structural entries only
  std::vector<double> lower_, upper_, value_;
  std::vector<double> b_;
  double bnorm_ = 0.0;

  std::vector<int> basis_;      // row -> column
  std::vector<int> in_row_;     // column -> row or -1
  std::vector<uint8_t> at_up_;  // nonbasic resting position
  std::vector<double> binv_;    // m*m, column-major
  std::vector<double> w_;       // FTRAN scratch
  std::vector<double> y_;       // BTRAN scratch

  double binv_at(int i, int k) const { return binv_[static_cast<size_t>(k) * m_ + i]; }

  bool out_of_time() const {
    return tol_.time_limit_s > 0 &&
           std::chrono::duration<double>(Clock::now() - start_).count() > tol_.time_limit_s;
  }

  void build() {
    const double sgn = p_.sense == Sense::Maximize ? -1.0 : 1.0;
    cols_.assign(n_, {});
    for (int i = 0; i < m_; ++i)
      for (size_t k = 0; k < p_.rows[i].cols.size(); ++k)
        cols_[p_.rows[i].cols[k]].push_back({i, p_.rows[i].vals[k]});

    total_ = n_ + m_;
    art_begin_ = total_;
    cost_.assign(total_, 0.0);
    lower_.assign(total_, 0.0);
    upper_.assign(total_, 0.0);
    value_.assign(total_, 0.0);
    at_up_.assign(total_, 0);
    in_row_.assign(total_, -1);
    b_.resize(m_);
    for (int j = 0; j < n_; ++j) {
      cost_[j] = sgn * p_.objective[j];
      lower_[j] = p_.lower[j];
      upper_[j] = p_.upper[j];
      if (std::isfinite(lower_[j])) {
        value_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        value_[j] = upper_[j];
        at_up_[j] = 1;
      } else {
        value_[j] = 0.0;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      switch (p_.rows[i].rel) {
        case Relation::LessEqual: lower_[s] = 0.0; upper_[s] = kInf; break;
        case Relation::GreaterEqual: lower_[s] = -kInf; upper_[s] = 0.0; break;
        case Relation::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
      }
      b_[i] = p_.rows[i].rhs;
      bnorm_ = std::max(bnorm_, std::abs(b_[i]));
    }

    // Row activity at the initial nonbasic point.
    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (value_[j] == 0.0) continue;
      for (const auto& [i, v] : cols_[j]) act[i] += v * value_[j];
    }

    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const double resid = b_[i] - act[i];
      if (resid >= lower_[s] - tol_.feas_tol && resid <= upper_[s] + tol_.feas_tol) {
        value_[s] = std::clamp(resid, lower_[s], upper_[s]);
        basis_[i] = s;
        in_row_[s] = i;
      } else {
        const double rest = std::clamp(resid, lower_[s], upper_[s]);
        value_[s] = rest;
        at_up_[s] = resid > upper_[s] ? 1 : 0;
        art_row_.push_back(i);
        art_sign_.push_back(resid - rest > 0 ? 1.0 : -1.0);
      }
    }
    num_art_ = static_cast<int>(art_row_.size());
    total_ += num_art_;
    cost_.resize(total_, 0.0);
    lower_.resize(total_, 0.0);
    upper_.resize(total_, kInf);
    value_.resize(total_, 0.0);
    at_up_.resize(total_, 0);
    in_row_.resize(total_, -1);

    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    std::vector<double> act2 = act;
    for (int k = 0; k < num_art_; ++k) {
      const int c = art_begin_ + k;
      const int i = art_row_[k];
      const double resid = b_[i] - act2[i] - value_[n_ + i];
      value_[c] = resid / art_sign_[k];
      basis_[i] = c;
      in_row_[c] = i;
    }
    for (int i = 0; i < m_; ++i) {
      const int c = basis_[i];
      const double diag = c >= art_begin_ ? art_sign_[c - art_begin_] : 1.0;
      binv_[static_cast<size_t>(i) * m_ + i] = 1.0 / diag;
    }
  }

  double column_coeff(int c, int row) const {
    if (c < n_) {
      for (const auto& [i, v] : cols_[c])
        if (i == row) return v;
      return 0.0;
    }
    if (c < art_begin_) return c - n_ == row ? 1.0 : 0.0;
    return art_row_[c - art_begin_] == row ? art_sign_[c - art_begin_] : 0.0;
  }

  // w := Binv * column(c)
  void ftran(int c) {
    std::fill(w_.begin(), w_.end(), 0.0);
    auto axpy = [&](int k, double v) {
      const double* colk = &binv_[static_cast<size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) w_[i] += v * colk[i];
    };
    if (c < n_) {
      for (const auto& [i, v] : cols_[c]) axpy(i, v);
    } else if (c < art_begin_) {
      axpy(c - n_, 1.0);
    } else {
      axpy(art_row_[c - art_begin_], art_sign_[c - art_begin_]);
    }
  }

  double phase_cost(int c) const {
    if (phase_ == 1) return c >= art_begin_ ? 1.0 : 0.0;
    return c < total_ ? cost_[c] : 0.0;
  }

  // y := cost_B' * Binv
  void btran() {
    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = phase_cost(basis_[i]);
    for (int k = 0; k < m_; ++k) {
      const double* colk = &binv_[static_cast<size_t>(k) * m_];
      double acc = 0.0;
      for (int i = 0; i < m_; ++i) acc += cb[i] * colk[i];
      y_[k] = acc;
    }
  }

  double reduced_cost(int c) const {
    double d = phase_cost(c);
    if (c < n_) {
      for (const auto& [i, v] : cols_[c]) d -= y_[i] * v;
    } else if (c < art_begin_) {
      d -= y_[c - n_];
    } else {
      d -= y_[art_row_[c - art_begin_]] * art_sign_[c - art_begin_];
    }
    return d;
  }

  bool fixed(int c) const { return lower_[c] == upper_[c]; }
  bool is_free(int c) const { return !std::isfinite(lower_[c]) && !std::isfinite(upper_[c]); }

  Outcome iterate() {
    w_.resize(m_);
    y_.resize(m_);
    const double dtol = 1e-9;
    while (true) {
      if (iter_ >= max_iter_) return Outcome::Limit;
      if ((iter_ & 15) == 0 && out_of_time()) return Outcome::Limit;
      btran();

      const int limit = phase_ == 1 ? total_ : art_begin_;
      int enter = -1;
      double best = -dtol;
      int dir = 0;
      for (int c = 0; c < limit; ++c) {
        if (in_row_[c] >= 0 || fixed(c)) continue;
        const double d = reduced_cost(c);
        double score;
        int cdir;
        if (is_free(c)) {
          score = -std::abs(d);
          cdir = d < 0 ? +1 : -1;
        } else if (at_up_[c]) {
          score = -d;
          cdir = -1;
        } else {
          score = d;
          cdir = +1;
        }
        if (score < best) {
          enter = c;
          dir = cdir;
          if (bland_) break;
          best = score;
        }
      }
      if (enter < 0) return Outcome::Converged;

      ftran(enter);

      // Ratio test: entering variable moves by dir*t, basic i changes at
      // rate -dir*w_i.
      double t_limit = kInf;
      if (std::isfinite(lower_[enter]) && std::isfinite(upper_[enter]))
        t_limit = upper_[enter] - lower_[enter];
      int leave = -1;
      double leave_pivot = 0.0;
      double best_t = t_limit;
      int leave_bound = 0;  // 0: hits lower, 1: hits upper
      for (int i = 0; i < m_; ++i) {
        const double rate = -dir * w_[i];
        if (std::abs(rate) <= tol_.pivot_tol) continue;
        const int c = basis_[i];
        double t, hits;
        if (rate < 0) {
          if (!std::isfinite(lower_[c])) continue;
          t = (value_[c] - lower_[c]) / (-rate);
          hits = 0;
        } else {
          if (!std::isfinite(upper_[c])) continue;
          t = (upper_[c] - value_[c]) / rate;
          hits = 1;
        }
        t = std::max(t, 0.0);
        bool better;
        if (leave < 0) {
          better = t < best_t;
        } else if (bland_) {
          better = t < best_t - 1e-12 ||
                   (t <= best_t + 1e-12 && c < basis_[leave]);
        } else {
          better = t < best_t - 1e-12 ||
                   (t <= best_t + 1e-12 && std::abs(w_[i]) > std::abs(leave_pivot));
        }
        if (better) {
          best_t = std::min(t, best_t);
          leave = i;
          leave_pivot = w_[i];
          leave_bound = static_cast<int>(hits);
        }
      }

      if (leave < 0 && !std::isfinite(best_t)) {
        if (phase_ == 1) return Outcome::Limit;  // cannot happen: phase-1 objective is bounded
        return Outcome::Unbounded;
      }

      ++iter_;
      const double step = best_t;
      if (step < 1e-12) {
        if (++degen_streak_ >= tol_.degeneracy_streak) bland_ = true;
      } else {
        degen_streak_ = 0;
        bland_ = false;
      }

      if (leave < 0) {
        // Bound flip: entering variable crosses to its opposite bound.
        value_[enter] += dir * step;
        at_up_[enter] ^= 1;
        value_[enter] = at_up_[enter] ? upper_[enter] : lower_[enter];
        for (int i = 0; i < m_; ++i) value_[basis_[i]] -= dir * step * w_[i];
        continue;
      }

      const int out = basis_[leave];
      value_[enter] += dir * step;
      for (int i = 0; i < m_; ++i) value_[basis_[i]] -= dir * step * w_[i];
      value_[out] = leave_bound ? upper_[out] : lower_[out];
      at_up_[out] = static_cast<uint8_t>(leave_bound);
      in_row_[out] = -1;
      basis_[leave] = enter;
      in_row_[enter] = leave;
      update_binv(leave);
    }
  }

  // Rank-1 update: Binv := E * Binv with pivot row r and column w_.
  void update_binv(int r) {
    const double piv = w_[r];
    for (int k = 0; k < m_; ++k) {
      double* colk = &binv_[static_cast<size_t>(k) * m_];
      const double t = colk[r] / piv;
      if (t == 0.0) continue;
      for (int i = 0; i < m_; ++i) colk[i] -= t * w_[i];
      colk[r] = t;
    }
  }

  void drive_out_artificials() {
    bool swapped = false;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) continue;
      // Row r of Binv*A over nonbasic structural and slack columns.
      std::vector<double> brow(m_);
      for (int k = 0; k < m_; ++k) brow[k] = binv_at(r, k);
      int pick = -1;
      double pick_mag = 1e-7;
      for (int c = 0; c < art_begin_; ++c) {
        if (in_row_[c] >= 0 || fixed(c)) continue;
        double v = 0.0;
        if (c < n_) {
          for (const auto& [i, cv] : cols_[c]) v += brow[i] * cv;
        } else {
          v = brow[c - n_];
        }
        if (std::abs(v) > pick_mag) {
          pick_mag = std::abs(v);
          pick = c;
        }
      }
      if (pick < 0) continue;  // redundant row; artificial stays basic at zero
      w_.resize(m_);
      ftran(pick);
      const int out = basis_[r];
      in_row_[out] = -1;
      at_up_[out] = 0;
      value_[out] = 0.0;
      basis_[r] = pick;
      in_row_[pick] = r;
      update_binv(r);
      swapped = true;
    }
    if (swapped) recompute_basic_values();
  }

  void recompute_basic_values() {
    std::vector<double> rhs(b_);
    for (int c = 0; c < total_; ++c) {
      if (in_row_[c] >= 0 || value_[c] == 0.0) continue;
      if (c < n_) {
        for (const auto& [i, v] : cols_[c]) rhs[i] -= v * value_[c];
      } else if (c < art_begin_) {
        rhs[c - n_] -= value_[c];
      } else {
        rhs[art_row_[c - art_begin_]] -= art_sign_[c - art_begin_] * value_[c];
      }
    }
    for (int i = 0; i < m_; ++i) {
      double acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += binv_at(i, k) * rhs[k];
      value_[basis_[i]] = acc;
    }
  }

  void refactorize() {
    // Dense Gauss-Jordan inversion of the basis matrix, row-major scratch.
    const size_t mm = static_cast<size_t>(m_);
    std::vector<double> a(mm * mm, 0.0);  // a[i*m + r] = A_B(row i, basis slot r)
    for (int r = 0; r < m_; ++r) {
      const int c = basis_[r];
      if (c < n_) {
        for (const auto& [i, v] : cols_[c]) a[static_cast<size_t>(i) * m_ + r] = v;
      } else if (c < art_begin_) {
        a[static_cast<size_t>(c - n_) * m_ + r] = 1.0;
      } else {
        a[static_cast<size_t>(art_row_[c - art_begin_]) * m_ + r] =
            art_sign_[c - art_begin_];
      }
    }
    std::vector<double> inv(mm * mm, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<size_t>(i) * m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double mag = 0.0;
      for (int r = col; r < m_; ++r) {
        const double v = a[static_cast<size_t>(r) * m_ + col];
        if (std::abs(v) > mag) {
          mag = std::abs(v);
          piv = r;
        }
      }
      if (piv < 0 || mag < 1e-13) continue;  // numerically singular direction
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(a[static_cast<size_t>(piv) * m_ + k],
                    a[static_cast<size_t>(col) * m_ + k]);
          std::swap(inv[static_cast<size_t>(piv) * m_ + k],
                    inv[static_cast<size_t>(col) * m_ + k]);
        }
      }
      const double pval = a[static_cast<size_t>(col) * m_ + col];
      for (int k = 0; k < m_; ++k) {
        a[static_cast<size_t>(col) * m_ + k] /= pval;
        inv[static_cast<size_t>(col) * m_ + k] /= pval;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = a[static_cast<size_t>(r) * m_ + col];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          a[static_cast<size_t>(r) * m_ + k] -= f * a[static_cast<size_t>(col) * m_ + k];
          inv[static_cast<size_t>(r) * m_ + k] -= f * inv[static_cast<size_t>(col) * m_ + k];
        }
      }
    }
    // inv (row-major) now holds A_B^{-1}; binv_ stores it column-major.
    for (int k = 0; k < m_; ++k)
      for (int i = 0; i < m_; ++i)
        binv_[static_cast<size_t>(k) * m_ + i] = inv[static_cast<size_t>(i) * m_ + k];
    recompute_basic_values();
  }

  // Verifies the claimed optimum against the original data (catches basis
  // inverse drift from long product-form update chains).
  bool certify() {
    const double ptol = tol_.feas_tol * (1.0 + bnorm_);
    // Bounds of every tracked value.
    for (int c = 0; c < total_; ++c)
      if (value_[c] < lower_[c] - ptol || value_[c] > upper_[c] + ptol) return false;
    // Row equations A x + s (+ artificials) = b recomputed from scratch.
    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (value_[j] == 0.0) continue;
      for (const auto& [i, v] : cols_[j]) act[i] += v * value_[j];
    }
    for (int i = 0; i < m_; ++i) act[i] += value_[n_ + i];
    for (int k = 0; k < num_art_; ++k)
      act[art_row_[k]] += art_sign_[k] * value_[art_begin_ + k];
    for (int i = 0; i < m_; ++i)
      if (std::abs(act[i] - b_[i]) > ptol) return false;
    return true;
  }

  LpSolution finish_limit(LpSolution& out) {
    out.status = LpStatus::IterationLimit;
    out.iterations = iter_;
    out.primal.assign(value_.begin(), value_.begin() + n_);
    out.dual.assign(m_, 0.0);
    out.reduced_cost.assign(n_, 0.0);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += p_.objective[j] * value_[j];
    out.objective = obj;
    return out;
  }

  LpSolution extract(LpSolution& out, LpStatus st) {
    out.status = st;
    out.iterations = iter_;
    out.primal.assign(value_.begin(), value_.begin() + n_);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += p_.objective[j] * value_[j];
    out.objective = obj;
    btran();
    const double flip = p_.sense == Sense::Maximize ? -1.0 : 1.0;
    out.dual.resize(m_);
    for (int i = 0; i < m_; ++i) out.dual[i] = flip * y_[i];
    out.reduced_cost.resize(n_);
    for (int j = 0; j < n_; ++j) out.reduced_cost[j] = flip * reduced_cost(j);
    return out;
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SolverTolerances& tol) {
  problem.validate();
  Simplex solver(problem, tol);
  return solver.run();
}

double ResidualReport::max_residual() const {
  return std::max({primal_infeasibility, dual_infeasibility,
                   complementary_slackness, duality_gap});
}

ResidualReport evaluate_residuals(const LpProblem& p, const LpSolution& s) {
  if (static_cast<int>(s.primal.size()) != p.num_vars() ||
      static_cast<int>(s.dual.size()) != p.num_rows())
    throw std::invalid_argument("residuals: solution dimensions do not match problem");

  ResidualReport rep;
  const int n = p.num_vars();
  const int m = p.num_rows();
  const bool maximize = p.sense == Sense::Maximize;

  std::vector<double> act(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (size_t k = 0; k < p.rows[i].cols.size(); ++k)
      act[i] += p.rows[i].vals[k] * s.primal[p.rows[i].cols[k]];

  for (int i = 0; i < m; ++i) {
    const double r = p.rows[i].rhs;
    double viol = 0.0;
    switch (p.rows[i].rel) {
      case Relation::LessEqual: viol = act[i] - r; break;
      case Relation::GreaterEqual: viol = r - act[i]; break;
      case Relation::Equal: viol = std::abs(act[i] - r); break;
    }
    rep.primal_infeasibility = std::max(rep.primal_infeasibility, viol);
    // Row-level complementary slackness: dual * slack.
    if (p.rows[i].rel != Relation::Equal)
      rep.complementary_slackness =
          std::max(rep.complementary_slackness, std::abs(s.dual[i] * (r - act[i])));
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.lower[j]))
      rep.primal_infeasibility =
          std::max(rep.primal_infeasibility, p.lower[j] - s.primal[j]);
    if (std::isfinite(p.upper[j]))
      rep.primal_infeasibility =
          std::max(rep.primal_infeasibility, s.primal[j] - p.upper[j]);
  }

  // Reduced costs from the reported duals; dual feasibility and bound-level
  // complementary slackness. Sign rules are in the problem's own sense.
  std::vector<double> z(p.objective);
  for (int i = 0; i < m; ++i)
    for (size_t k = 0; k < p.rows[i].cols.size(); ++k)
      z[p.rows[i].cols[k]] -= s.dual[i] * p.rows[i].vals[k];

  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) dual_obj += s.dual[i] * p.rows[i].rhs;
  for (int j = 0; j < n; ++j) {
    const double zj = z[j];
    const bool has_l = std::isfinite(p.lower[j]);
    const bool has_u = std::isfinite(p.upper[j]);
    // For a maximize problem a positive reduced cost must be supported by a
    // finite upper bound, a negative one by a finite lower bound (mirrored
    // for minimize).
    const double push_up = maximize ? zj : -zj;
    if (push_up > 0) {
      if (has_u) {
        dual_obj += zj * p.upper[j];
        rep.complementary_slackness = std::max(
            rep.complementary_slackness, std::abs(zj) * (p.upper[j] - s.primal[j]));
      } else {
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, std::abs(zj));
      }
    } else if (push_up < 0) {
      if (has_l) {
        dual_obj += zj * p.lower[j];
        rep.complementary_slackness = std::max(
            rep.complementary_slackness, std::abs(zj) * (s.primal[j] - p.lower[j]));
      } else {
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, std::abs(zj));
      }
    }
  }
  // Dual sign feasibility per row relation.
  for (int i = 0; i < m; ++i) {
    const double yi = s.dual[i];
    const double bad = maximize
                           ? (p.rows[i].rel == Relation::LessEqual ? -yi
                              : p.rows[i].rel == Relation::GreaterEqual ? yi : 0.0)
                           : (p.rows[i].rel == Relation::LessEqual ? yi
                              : p.rows[i].rel == Relation::GreaterEqual ? -yi : 0.0);
    rep.dual_infeasibility = std::max(rep.dual_infeasibility, bad);
  }

  rep.duality_gap = std::abs(s.objective - dual_obj);
  return rep;
}

void write_lp_text(const LpProblem& p, std::ostream& out) {
  auto vname = [&](int j) {
    return !p.var_names.empty() && !p.var_names[j].empty() ? p.var_names[j]
                                                           : "x" + std::to_string(j);
  };
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  out << (p.sense == Sense::Maximize ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  for (int j = 0; j < p.num_vars(); ++j)
    if (p.objective[j] != 0.0) out << " + " << num(p.objective[j]) << " " << vname(j);
  out << "\nSubject To\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const LpRow& r = p.rows[i];
    out << " " << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ":";
    for (size_t k = 0; k < r.cols.size(); ++k)
      out << " + " << num(r.vals[k]) << " " << vname(r.cols[k]);
    const char* rel = r.rel == Relation::LessEqual ? "<="
                      : r.rel == Relation::Equal  ? "="
                                                  : ">=";
    out << " " << rel << " " << num(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < p.num_vars(); ++j)
    out << " " << num(p.lower[j]) << " <= " << vname(j) << " <= " << num(p.upper[j])
        << "\n";
  out << "End\n";
}

}  // namespace bipopt
