#include "mofw/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "mofw/error.hpp"

namespace mofw::lp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::pivot_limit: return "pivot_limit";
  }
  return "unknown";
}

void LpProblem::validate() const {
  const auto k = objective.size();
  if (k == 0) throw DimensionError("lp: at least one variable required");
  if (ineq_lhs.rows() != ineq_rhs.size() || (ineq_lhs.rows() > 0 && ineq_lhs.cols() != k))
    throw DimensionError("lp: inequality block has inconsistent shape");
  if (eq_lhs.rows() != eq_rhs.size() || (eq_lhs.rows() > 0 && eq_lhs.cols() != k))
    throw DimensionError("lp: equality block has inconsistent shape");
  if (!free_vars.empty() && static_cast<Eigen::Index>(free_vars.size()) != k)
    throw DimensionError("lp: free_vars must be empty or have one flag per variable");
}

namespace {

enum class StepOutcome { optimal, unbounded, budget };

// Standard-form tableau. Columns: split structural variables, one slack per
// inequality row, then artificials. The last column holds the right-hand side.
class Tableau {
 public:
  Tableau(const LpProblem& prob, const LpOptions& opts) : prob_(prob), opts_(opts) {
    const int k = prob.num_vars();
    column_of_.resize(k);
    for (int j = 0; j < k; ++j) {
      column_of_[j] = num_struct_;
      num_struct_ += prob.is_free(j) ? 2 : 1;
    }
    const int r1 = static_cast<int>(prob.ineq_rhs.size());
    const int r2 = static_cast<int>(prob.eq_rhs.size());
    rows_ = r1 + r2;

    std::vector<bool> needs_artificial(rows_, false);
    for (int i = 0; i < r1; ++i) needs_artificial[i] = prob.ineq_rhs[i] < 0.0;
    for (int i = 0; i < r2; ++i) needs_artificial[r1 + i] = true;
    num_artificial_ = static_cast<int>(std::count(needs_artificial.begin(), needs_artificial.end(), true));
    first_slack_ = num_struct_;
    first_artificial_ = num_struct_ + r1;
    cols_ = first_artificial_ + num_artificial_;

    T_ = MatrixXd::Zero(rows_, cols_ + 1);
    basis_.assign(rows_, -1);
    int next_art = first_artificial_;
    for (int i = 0; i < rows_; ++i) {
      const bool ineq = i < r1;
      const auto row = ineq ? prob.ineq_lhs.row(i) : prob.eq_lhs.row(i - r1);
      double rhs = ineq ? prob.ineq_rhs[i] : prob.eq_rhs[i - r1];
      for (int j = 0; j < k; ++j) {
        T_(i, column_of_[j]) = row[j];
        if (prob.is_free(j)) T_(i, column_of_[j] + 1) = -row[j];
      }
      if (ineq) T_(i, first_slack_ + i) = 1.0;
      T_(i, cols_) = rhs;
      if (rhs < 0.0) T_.row(i) *= -1.0;
      if (needs_artificial[i]) {
        T_(i, next_art) = 1.0;
        basis_[i] = next_art++;
      } else {
        basis_[i] = first_slack_ + i;
      }
    }
    max_pivots_ = opts.max_pivots > 0 ? opts.max_pivots : 50 * (rows_ + cols_) + 100;
    bland_threshold_ = 3 * (r1 + r2 + k);
  }

  LpSolution solve() {
    LpSolution sol;
    dump("initial");
    if (num_artificial_ > 0) {
      VectorXd phase1 = VectorXd::Zero(cols_);
      phase1.segment(first_artificial_, num_artificial_).setOnes();
      price(phase1);
      const StepOutcome out = iterate(/*allow_artificial=*/true, "phase1");
      if (out == StepOutcome::budget) return finish(sol, LpStatus::pivot_limit);
      const double infeas = -cost_[cols_];
      const double scale = 1.0 + T_.col(cols_).cwiseAbs().maxCoeff();
      if (infeas > 1e-9 * scale) return finish(sol, LpStatus::infeasible);
      drive_out_artificials();
    }
    VectorXd phase2 = VectorXd::Zero(cols_);
    for (int j = 0; j < prob_.num_vars(); ++j) {
      phase2[column_of_[j]] = prob_.objective[j];
      if (prob_.is_free(j)) phase2[column_of_[j] + 1] = -prob_.objective[j];
    }
    price(phase2);
    const StepOutcome out = iterate(/*allow_artificial=*/false, "phase2");
    if (out == StepOutcome::budget) return finish(sol, LpStatus::pivot_limit);
    if (out == StepOutcome::unbounded) return finish(sol, LpStatus::unbounded);

    VectorXd col_values = VectorXd::Zero(cols_);
    for (int i = 0; i < rows_; ++i) col_values[basis_[i]] = T_(i, cols_);
    sol.z.resize(prob_.num_vars());
    for (int j = 0; j < prob_.num_vars(); ++j) {
      sol.z[j] = col_values[column_of_[j]];
      if (prob_.is_free(j)) sol.z[j] -= col_values[column_of_[j] + 1];
    }
    sol.value = prob_.objective.dot(sol.z);
    return finish(sol, LpStatus::optimal);
  }

 private:
  LpSolution& finish(LpSolution& sol, LpStatus status) {
    sol.status = status;
    sol.iterations = pivots_;
    return sol;
  }

  // Reduced-cost row for column costs `c`; the rhs slot holds -(objective value).
  void price(const VectorXd& c) {
    cost_ = VectorXd::Zero(cols_ + 1);
    cost_.head(cols_) = c;
    for (int i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb != 0.0) cost_ -= cb * T_.row(i).transpose();
    }
  }

  StepOutcome iterate(bool allow_artificial, const char* phase) {
    int degenerate = 0;
    bool bland = false;
    const int limit_col = allow_artificial ? cols_ : first_artificial_;
    while (true) {
      int enter = -1;
      double best = -kOptimalityTolerance;
      for (int j = 0; j < limit_col; ++j) {
        if (cost_[j] < best) {
          enter = j;
          if (bland) break;
          best = cost_[j];
        }
      }
      if (enter < 0) return StepOutcome::optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double a = T_(i, enter);
        if (a <= kPivotTolerance) continue;
        const double ratio = std::max(0.0, T_(i, cols_)) / a;
        // Ties go to the smallest basic index (Bland's leaving rule).
        if (leave < 0 || ratio < best_ratio - kDegenerateStep) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + kDegenerateStep && basis_[i] < basis_[leave]) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return StepOutcome::unbounded;
      if (pivots_ >= max_pivots_) return StepOutcome::budget;

      if (best_ratio <= kDegenerateStep && ++degenerate > bland_threshold_) bland = true;
      pivot(leave, enter);
      if (opts_.trace) {
        *opts_.trace << phase << " pivot " << pivots_ << ": enter " << enter << " leave row "
                     << leave << (bland ? " (bland)" : "") << '\n';
        dump(nullptr);
      }
    }
  }

  void pivot(int r, int c) {
    ++pivots_;
    T_.row(r) /= T_(r, c);
    T_(r, c) = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f != 0.0) {
        T_.row(i) -= f * T_.row(r);
        T_(i, c) = 0.0;
      }
    }
    const double f = cost_[c];
    if (f != 0.0) {
      cost_ -= f * T_.row(r).transpose();
      cost_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // After a feasible phase 1, pivot basic artificials (at zero level) onto
  // structural or slack columns; rows with no usable pivot are redundant and dropped.
  void drive_out_artificials() {
    for (int i = 0; i < rows_;) {
      if (basis_[i] < first_artificial_) {
        ++i;
        continue;
      }
      int best = -1;
      double best_abs = kPivotTolerance;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(T_(i, j)) > best_abs) {
          best_abs = std::abs(T_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        T_(i, cols_) = 0.0;
        pivot(i, best);
        if (opts_.trace) {
          *opts_.trace << "drive-out pivot " << pivots_ << ": enter " << best << " row " << i << '\n';
          dump(nullptr);
        }
        ++i;
      } else {
        remove_row(i);
      }
    }
  }

  void remove_row(int r) {
    const int tail = rows_ - r - 1;
    if (tail > 0) T_.middleRows(r, tail) = T_.bottomRows(tail).eval();
    T_.conservativeResize(rows_ - 1, Eigen::NoChange);
    basis_.erase(basis_.begin() + r);
    --rows_;
    if (opts_.trace) *opts_.trace << "dropped redundant row " << r << '\n';
  }

  void dump(const char* label) const {
    if (!opts_.trace) return;
    std::ostream& os = *opts_.trace;
    if (label) os << "tableau " << label << " (" << rows_ << "x" << cols_ << ")\n";
    const auto old = os.precision(6);
    for (int i = 0; i < rows_; ++i) {
      os << "  [" << std::setw(3) << basis_[i] << "]";
      for (int j = 0; j <= cols_; ++j) os << ' ' << std::setw(10) << T_(i, j);
      os << '\n';
    }
    if (cost_.size() == cols_ + 1) {
      os << "  cost ";
      for (int j = 0; j <= cols_; ++j) os << ' ' << std::setw(10) << cost_[j];
      os << '\n';
    }
    os.precision(old);
  }

  const LpProblem& prob_;
  const LpOptions& opts_;
  std::vector<int> column_of_;
  int num_struct_ = 0;
  int first_slack_ = 0;
  int first_artificial_ = 0;
  int num_artificial_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  MatrixXd T_;
  VectorXd cost_;
  std::vector<int> basis_;
  int pivots_ = 0;
  int max_pivots_ = 0;
  int bland_threshold_ = 0;
};

// Folds singleton rows into variable bounds before the tableau is built:
// a singleton equality fixes its variable, and a singleton inequality with a
// negative coefficient becomes a lower bound, absorbed by the shift
// z = lb + z', z' >= 0. Empty rows are checked and dropped.
class Presolve {
 public:
  explicit Presolve(const LpProblem& prob) : prob_(prob) {
    const int k = prob.num_vars();
    lower_.assign(k, -std::numeric_limits<double>::infinity());
    fixed_.assign(k, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < k; ++j)
      if (!prob.is_free(j)) lower_[j] = 0.0;
    ineq_keep_.assign(prob.ineq_rhs.size(), true);
    eq_keep_.assign(prob.eq_rhs.size(), true);
  }

  // Returns false when the bounds alone prove infeasibility.
  bool run() {
    constexpr double tol = 1e-12;
    const auto r1 = prob_.ineq_rhs.size();
    const auto r2 = prob_.eq_rhs.size();
    // Singleton equalities first: fixed values feed into everything else.
    for (Eigen::Index i = 0; i < r2; ++i) {
      int col = -1;
      if (count_nonzeros(prob_.eq_lhs, i, col) > 1) continue;
      eq_keep_[i] = false;
      const double r = prob_.eq_rhs[i];
      if (col < 0) {
        if (std::abs(r) > 1e-9 * (1.0 + std::abs(r))) return false;
        continue;
      }
      const double value = r / prob_.eq_lhs(i, col);
      if (is_fixed(col)) {
        if (std::abs(fixed_[col] - value) > 1e-9 * (1.0 + std::abs(value))) return false;
        continue;
      }
      if (value < lower_[col] - 1e-9) return false;
      fixed_[col] = value;
    }
    for (Eigen::Index i = 0; i < r1; ++i) {
      int col = -1;
      if (count_nonzeros(prob_.ineq_lhs, i, col) > 1) continue;
      const double r = prob_.ineq_rhs[i];
      if (col < 0) {
        if (r < -1e-9 * (1.0 + std::abs(r))) return false;
        ineq_keep_[i] = false;
        continue;
      }
      const double a = prob_.ineq_lhs(i, col);
      if (is_fixed(col)) {
        if (a * fixed_[col] > r + 1e-9 * (1.0 + std::abs(r))) return false;
        ineq_keep_[i] = false;
      } else if (a < -tol) {
        lower_[col] = std::max(lower_[col], r / a);
        ineq_keep_[i] = false;
      }
    }
    build();
    return true;
  }

  const LpProblem& reduced() const { return reduced_; }

  Eigen::VectorXd restore(const Eigen::VectorXd& zr) const {
    Eigen::VectorXd z(prob_.num_vars());
    for (int j = 0; j < prob_.num_vars(); ++j) {
      if (is_fixed(j)) {
        z[j] = fixed_[j];
      } else {
        const double v = zr[new_index_[j]];
        z[j] = std::isfinite(lower_[j]) ? lower_[j] + v : v;
      }
    }
    return z;
  }

 private:
  static int count_nonzeros(const MatrixXd& lhs, Eigen::Index row, int& col) {
    int count = 0;
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      if (lhs(row, j) != 0.0) {
        ++count;
        col = static_cast<int>(j);
      }
    }
    return count;
  }

  bool is_fixed(int j) const { return !std::isnan(fixed_[j]); }

  void build() {
    const int k = prob_.num_vars();
    new_index_.assign(k, -1);
    int kr = 0;
    // Offset added to every row by the fixed values and lower-bound shifts.
    Eigen::VectorXd base = Eigen::VectorXd::Zero(k);
    for (int j = 0; j < k; ++j) {
      if (is_fixed(j)) {
        base[j] = fixed_[j];
      } else {
        new_index_[j] = kr++;
        if (std::isfinite(lower_[j])) base[j] = lower_[j];
      }
    }
    if (kr == 0) {
      // Every variable is fixed; keep one dummy nonnegative column so the
      // tableau still has a variable and the remaining rows are checked.
      kr = 1;
    }
    auto keep_rows = [&](const Eigen::MatrixXd& lhs, const Eigen::VectorXd& rhs,
                         const std::vector<bool>& keep, Eigen::MatrixXd& out_lhs,
                         Eigen::VectorXd& out_rhs) {
      const auto rows = static_cast<Eigen::Index>(std::count(keep.begin(), keep.end(), true));
      out_lhs = Eigen::MatrixXd::Zero(rows, kr);
      out_rhs.resize(rows);
      Eigen::Index r = 0;
      for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
        if (!keep[i]) continue;
        for (int j = 0; j < k; ++j)
          if (new_index_[j] >= 0) out_lhs(r, new_index_[j]) = lhs(i, j);
        double shift = 0.0;
        for (int j = 0; j < k; ++j) shift += lhs(i, j) * base[j];
        out_rhs[r] = rhs[i] - shift;
        ++r;
      }
    };
    keep_rows(prob_.ineq_lhs, prob_.ineq_rhs, ineq_keep_, reduced_.ineq_lhs, reduced_.ineq_rhs);
    keep_rows(prob_.eq_lhs, prob_.eq_rhs, eq_keep_, reduced_.eq_lhs, reduced_.eq_rhs);
    reduced_.objective = Eigen::VectorXd::Zero(kr);
    reduced_.free_vars.assign(kr, false);
    for (int j = 0; j < k; ++j) {
      if (new_index_[j] < 0) continue;
      reduced_.objective[new_index_[j]] = prob_.objective[j];
      reduced_.free_vars[new_index_[j]] = !std::isfinite(lower_[j]);
    }
  }

  const LpProblem& prob_;
  std::vector<double> lower_;
  std::vector<double> fixed_;
  std::vector<bool> ineq_keep_;
  std::vector<bool> eq_keep_;
  std::vector<int> new_index_;
  LpProblem reduced_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob, const LpOptions& opts) {
  prob.validate();
  Presolve pre(prob);
  if (!pre.run()) {
    LpSolution sol;
    sol.status = LpStatus::infeasible;
    return sol;
  }
  Tableau tab(pre.reduced(), opts);
  LpSolution sol = tab.solve();
  if (sol.status == LpStatus::optimal) {
    sol.z = pre.restore(sol.z);
    sol.value = prob.objective.dot(sol.z);
  }
  return sol;
}

}  // namespace mofw::lp
