#pragma once

// Dense two-phase tableau simplex with Bland's smallest-index rule.
// Instantiated with Rational for exact solves and with double for fast
// screening; both share the same pivoting code.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hzlab/rational.hpp"

namespace hzlab {

class LpError : public std::runtime_error {
 public:
  explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

enum class Relation { less_equal, equal, greater_equal };

template <class Scalar>
struct Constraint {
  std::vector<Scalar> coefficients;
  Relation relation = Relation::less_equal;
  Scalar rhs{};
};

/// minimize objective . x  subject to constraints, x >= lower_bounds
/// (lower_bounds empty means all zero).
template <class Scalar>
struct LinearProgram {
  std::vector<Scalar> objective;
  std::vector<Constraint<Scalar>> constraints;
  std::vector<Scalar> lower_bounds;

  std::size_t num_vars() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

template <class Scalar>
struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  std::vector<Scalar> solution;
  Scalar objective_value{};

  friend bool operator==(const LpOutcome&, const LpOutcome&) = default;
};

template <class Scalar>
struct Feasibility {
  bool feasible = false;
  std::vector<Scalar> witness;
};

namespace detail {

template <class Scalar>
class Tableau {
  using T = ScalarTraits<Scalar>;

 public:
  // Builds the phase-one tableau. Rows are flipped so every rhs is
  // nonnegative; <= rows start with their slack basic, the others with an
  // artificial.
  explicit Tableau(const LinearProgram<Scalar>& lp) : n_(lp.num_vars()) {
    const std::size_t m = lp.constraints.size();
    std::vector<Scalar> lower = lp.lower_bounds;
    if (lower.empty()) lower.assign(n_, Scalar(0));
    shift_ = lower;

    std::size_t slacks = 0, artificials = 0;
    std::vector<Relation> rel(m);
    std::vector<Scalar> rhs(m);
    std::vector<bool> flip(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = lp.constraints[i];
      Scalar b = c.rhs;
      for (std::size_t j = 0; j < n_; ++j) b -= c.coefficients[j] * lower[j];
      rel[i] = c.relation;
      if (T::is_negative(b)) {
        flip[i] = true;
        b = -b;
        if (rel[i] == Relation::less_equal)
          rel[i] = Relation::greater_equal;
        else if (rel[i] == Relation::greater_equal)
          rel[i] = Relation::less_equal;
      }
      rhs[i] = b;
      if (rel[i] != Relation::equal) ++slacks;
      if (rel[i] != Relation::less_equal) ++artificials;
    }
    slack_begin_ = n_;
    art_begin_ = n_ + slacks;
    cols_ = art_begin_ + artificials;
    rows_.assign(m, std::vector<Scalar>(cols_ + 1, Scalar(0)));
    basis_.assign(m, 0);

    std::size_t s = slack_begin_, art = art_begin_;
    for (std::size_t i = 0; i < m; ++i) {
      auto& row = rows_[i];
      const auto& c = lp.constraints[i];
      for (std::size_t j = 0; j < n_; ++j) row[j] = flip[i] ? Scalar(-c.coefficients[j]) : c.coefficients[j];
      row[cols_] = rhs[i];
      if (rel[i] == Relation::less_equal) {
        row[s] = 1;
        basis_[i] = s++;
      } else {
        if (rel[i] == Relation::greater_equal) row[s++] = -1;
        row[art] = 1;
        basis_[i] = art++;
      }
    }
  }

  /// Phase one; returns false when the constraints are infeasible.
  bool find_feasible_basis() {
    std::vector<Scalar> cost(cols_, Scalar(0));
    for (std::size_t j = art_begin_; j < cols_; ++j) cost[j] = 1;
    set_objective(cost);
    run(cols_);
    if (T::is_positive(-objective_[cols_])) return false;
    drive_out_artificials();
    return true;
  }

  /// Phase two over the original variables; false when unbounded.
  bool optimize(const std::vector<Scalar>& c) {
    std::vector<Scalar> cost(cols_, Scalar(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];
    set_objective(cost);
    return run(art_begin_);
  }

  std::vector<Scalar> solution() const {
    std::vector<Scalar> x = shift_;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n_) x[basis_[i]] += rows_[i][cols_];
    return x;
  }

 private:
  void set_objective(const std::vector<Scalar>& cost) {
    objective_.assign(cols_ + 1, Scalar(0));
    for (std::size_t j = 0; j < cols_; ++j) objective_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Scalar cb = cost[basis_[i]];
      if (T::is_zero(cb)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) objective_[j] -= cb * rows_[i][j];
    }
  }

  // Runs simplex iterations allowing entering columns < `limit`.
  bool run(std::size_t limit) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (T::is_negative(objective_[j])) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::optional<std::size_t> leave;
      Scalar best_ratio{};
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!T::is_positive(rows_[i][enter])) continue;
        Scalar ratio = rows_[i][cols_] / rows_[i][enter];
        if (!leave || T::less(ratio, best_ratio) ||
            (T::equal(ratio, best_ratio) && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    const Scalar inv = Scalar(1) / prow[c];
    for (auto& v : prow) v *= inv;
    prow[c] = 1;
    auto eliminate = [&](std::vector<Scalar>& row) {
      const Scalar f = row[c];
      if (T::is_zero(f)) {
        row[c] = 0;
        return;
      }
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
      row[c] = 0;
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(objective_);
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < art_begin_) {
        ++i;
        continue;
      }
      std::size_t c = art_begin_;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (!T::is_zero(rows_[i][j])) {
          c = j;
          break;
        }
      }
      if (c == art_begin_) {  // redundant row
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, c);
      ++i;
    }
  }

  std::size_t n_;
  std::size_t slack_begin_ = 0, art_begin_ = 0, cols_ = 0;
  std::vector<Scalar> shift_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<Scalar> objective_;
};

template <class Scalar>
void check_dimensions(const LinearProgram<Scalar>& lp) {
  const std::size_t n = lp.num_vars();
  if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != n)
    throw LpError("lower bound vector has wrong dimension");
  for (std::size_t i = 0; i < lp.constraints.size(); ++i)
    if (lp.constraints[i].coefficients.size() != n)
      throw LpError("constraint " + std::to_string(i) + " has wrong dimension");
}

}  // namespace detail

template <class Scalar>
LpOutcome<Scalar> solve_lp(const LinearProgram<Scalar>& lp) {
  detail::check_dimensions(lp);
  detail::Tableau<Scalar> tab(lp);
  LpOutcome<Scalar> out;
  if (!tab.find_feasible_basis()) {
    out.status = LpStatus::infeasible;
    return out;
  }
  if (!tab.optimize(lp.objective)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.solution = tab.solution();
  out.objective_value = Scalar(0);
  for (std::size_t j = 0; j < lp.num_vars(); ++j) out.objective_value += lp.objective[j] * out.solution[j];
  return out;
}

template <class Scalar>
Feasibility<Scalar> check_feasible(const LinearProgram<Scalar>& lp) {
  detail::check_dimensions(lp);
  detail::Tableau<Scalar> tab(lp);
  Feasibility<Scalar> out;
  out.feasible = tab.find_feasible_basis();
  if (out.feasible) out.witness = tab.solution();
  return out;
}

/// Exact residual check: does `x` satisfy every constraint and bound?
template <class Scalar>
bool satisfies(const LinearProgram<Scalar>& lp, const std::vector<Scalar>& x) {
  using T = ScalarTraits<Scalar>;
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Scalar lo = lp.lower_bounds.empty() ? Scalar(0) : lp.lower_bounds[j];
    if (T::less(x[j], lo)) return false;
  }
  for (const auto& c : lp.constraints) {
    Scalar lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coefficients[j] * x[j];
    switch (c.relation) {
      case Relation::less_equal:
        if (T::less(c.rhs, lhs)) return false;
        break;
      case Relation::greater_equal:
        if (T::less(lhs, c.rhs)) return false;
        break;
      case Relation::equal:
        if (!T::equal(lhs, c.rhs)) return false;
        break;
    }
  }
  return true;
}

}  // namespace hzlab
