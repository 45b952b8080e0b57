#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nlc/errors.hpp"

namespace nlc {

enum class LpSense { minimize, maximize };
enum class LpRelation { less_equal, equal, greater_equal };
enum class LpStatus { optimal, infeasible, unbounded };

/// A dense linear program over nonnegative variables:
///   optimize c.x  subject to  A x {<=, =, >=} b,  x >= 0.
struct LinearProgram {
  LpSense sense = LpSense::maximize;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<LpRelation> relations;
  std::vector<double> rhs;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }
};

/// Solution with one dual multiplier per row. The duals are the Lagrange
/// multipliers of the stated problem: b.y equals the optimum, y_i >= 0 on
/// <= rows (<= 0 when minimizing), and A^T y bounds c from the optimal
/// side (>= c when maximizing, <= c when minimizing).
struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> dual;
  int iterations = 0;
};

namespace detail {

class SimplexTableau {
 public:
  explicit SimplexTableau(const LinearProgram& lp) : lp_(lp) {
    const std::size_t n = lp.num_vars(), m = lp.num_rows();
    for (const auto& row : lp.rows)
      if (row.size() != n)
        throw std::invalid_argument("solve_lp: constraint row length mismatch");
    if (lp.relations.size() != m || lp.rhs.size() != m)
      throw std::invalid_argument("solve_lp: relation/rhs count mismatch");
    for (double c : lp.objective) check_finite(c);

    // Canonical orientation: nonnegative right-hand sides.
    flipped_.assign(m, false);
    relation_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      check_finite(lp.rhs[i]);
      LpRelation rel = lp.relations[i];
      if (lp.rhs[i] < 0.0) {
        flipped_[i] = true;
        if (rel == LpRelation::less_equal) rel = LpRelation::greater_equal;
        else if (rel == LpRelation::greater_equal) rel = LpRelation::less_equal;
      }
      relation_.push_back(rel);
    }

    // Columns: structural, then slack/surplus, then artificial.
    std::size_t n_slack = 0, n_art = 0;
    for (LpRelation rel : relation_) {
      if (rel != LpRelation::equal) ++n_slack;
      if (rel != LpRelation::less_equal) ++n_art;
    }
    ncols_ = n + n_slack + n_art;
    identity_col_.assign(m, 0);
    artificial_.assign(ncols_, false);

    tab_.assign(m, std::vector<double>(ncols_ + 1, 0.0));
    basis_.assign(m, 0);
    std::size_t slack_at = n, art_at = n + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
      const double sign = flipped_[i] ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        check_finite(lp.rows[i][j]);
        tab_[i][j] = sign * lp.rows[i][j];
      }
      tab_[i][ncols_] = sign * lp.rhs[i];
      switch (relation_[i]) {
        case LpRelation::less_equal:
          tab_[i][slack_at] = 1.0;
          basis_[i] = slack_at;
          identity_col_[i] = slack_at++;
          break;
        case LpRelation::greater_equal:
          tab_[i][slack_at++] = -1.0;
          tab_[i][art_at] = 1.0;
          artificial_[art_at] = true;
          basis_[i] = art_at;
          identity_col_[i] = art_at++;
          break;
        case LpRelation::equal:
          tab_[i][art_at] = 1.0;
          artificial_[art_at] = true;
          basis_[i] = art_at;
          identity_col_[i] = art_at++;
          break;
      }
    }
  }

  LpSolution solve() {
    const std::size_t m = lp_.num_rows();
    LpSolution out;
    barred_ = artificial_;  // artificials may not re-enter once out

    // Phase 1: maximize minus the artificial sum.
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m; ++i) need_phase1 = need_phase1 || artificial_[basis_[i]];
    if (need_phase1) {
      std::vector<double> cost(ncols_, 0.0);
      for (std::size_t j = 0; j < ncols_; ++j)
        if (artificial_[j]) cost[j] = -1.0;
      rebuild_objective(cost);
      for (std::size_t i = 0; i < m; ++i)
        if (artificial_[basis_[i]]) barred_[basis_[i]] = false;  // currently basic
      if (!iterate(out.iterations)) throw numerical_error("solve_lp: phase 1 stalled");
      if (obj_[ncols_] < -1e-8) {
        out.status = LpStatus::infeasible;
        return out;
      }
      // Pivot remaining artificials out where possible; an all-zero row is
      // redundant and its artificial stays basic at zero.
      for (std::size_t i = 0; i < m; ++i) {
        if (!artificial_[basis_[i]]) continue;
        for (std::size_t j = 0; j < ncols_; ++j) {
          if (artificial_[j] || std::abs(tab_[i][j]) <= 1e-9) continue;
          pivot(i, j);
          ++out.iterations;
          break;
        }
      }
      barred_ = artificial_;
      for (std::size_t i = 0; i < m; ++i) barred_[basis_[i]] = false;
    }

    // Phase 2: the real objective (internally always maximized).
    std::vector<double> cost(ncols_, 0.0);
    const double flip = lp_.sense == LpSense::minimize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < lp_.num_vars(); ++j) cost[j] = flip * lp_.objective[j];
    rebuild_objective(cost);
    if (!iterate(out.iterations)) {
      out.status = LpStatus::unbounded;
      return out;
    }

    out.status = LpStatus::optimal;
    out.objective = flip * obj_[ncols_];
    out.x.assign(lp_.num_vars(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis_[i] < lp_.num_vars()) out.x[basis_[i]] = tab_[i][ncols_];
    out.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double y = obj_[identity_col_[i]];
      if (flipped_[i]) y = -y;
      out.dual[i] = flip * y;
    }
    return out;
  }

 private:
  static void check_finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite coefficient");
  }

  // obj_[j] = (reduced cost) z_j - c_j; obj_[ncols_] = current objective.
  void rebuild_objective(const std::vector<double>& cost) {
    cost_ = cost;
    obj_.assign(ncols_ + 1, 0.0);
    for (std::size_t j = 0; j <= ncols_; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < lp_.num_rows(); ++i) z += cost_[basis_[i]] * tab_[i][j];
      obj_[j] = z - (j < ncols_ ? cost_[j] : 0.0);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = tab_[row][col];
    for (double& v : tab_[row]) v /= p;
    for (std::size_t i = 0; i < lp_.num_rows(); ++i) {
      if (i == row || tab_[i][col] == 0.0) continue;
      const double factor = tab_[i][col];
      for (std::size_t j = 0; j <= ncols_; ++j) tab_[i][j] -= factor * tab_[row][j];
      tab_[i][col] = 0.0;
    }
    if (obj_[col] != 0.0) {
      const double factor = obj_[col];
      for (std::size_t j = 0; j <= ncols_; ++j) obj_[j] -= factor * tab_[row][j];
      obj_[col] = 0.0;
    }
    barred_[basis_[row]] = artificial_[basis_[row]];  // leaving artificials stay out
    basis_[row] = col;
  }

  // Bland's rule on both choices: smallest improving column index enters,
  // smallest basic variable index leaves among the ratio ties.
  bool iterate(int& iterations) {
    for (int guard = 0; guard < kMaxPivots; ++guard) {
      std::size_t enter = ncols_;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (!barred_[j] && obj_[j] < -1e-9) {
          enter = j;
          break;
        }
      if (enter == ncols_) return true;  // optimal

      std::size_t leave = lp_.num_rows();
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < lp_.num_rows(); ++i) {
        if (tab_[i][enter] <= 1e-11) continue;
        const double ratio = tab_[i][ncols_] / tab_[i][enter];
        if (leave == lp_.num_rows() || ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == lp_.num_rows()) return false;  // unbounded direction
      pivot(leave, enter);
      ++iterations;
    }
    throw numerical_error("solve_lp: pivot cap of " + std::to_string(kMaxPivots) +
                          " exceeded");
  }

  static constexpr int kMaxPivots = 200000;

  const LinearProgram& lp_;
  std::size_t ncols_ = 0;
  std::vector<std::vector<double>> tab_;
  std::vector<double> obj_, cost_;
  std::vector<std::size_t> basis_, identity_col_;
  std::vector<bool> flipped_;
  std::vector<LpRelation> relation_;
  std::vector<bool> artificial_, barred_;
};

}  // namespace detail

/// Two-phase dense simplex with Bland's anti-cycling rule. Returns an
/// optimal basic solution with dual multipliers, or a distinct status for
/// infeasible / unbounded programs.
inline LpSolution solve_lp(const LinearProgram& lp) {
  detail::SimplexTableau tableau(lp);
  return tableau.solve();
}

}  // namespace nlc
