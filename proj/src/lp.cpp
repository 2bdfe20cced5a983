#include "iballoc/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace iballoc {

int LpProblem::add_row(double b, std::string name) {
  rhs.conservativeResize(rows + 1);
  rhs[rows] = b;
  row_names.push_back(name.empty() ? "r" + std::to_string(rows) : std::move(name));
  return rows++;
}

int LpProblem::add_col(double c, std::string name) {
  obj.push_back(c);
  cols.emplace_back();
  col_names.push_back(name.empty() ? "x" + std::to_string(cols.size() - 1)
                                   : std::move(name));
  return static_cast<int>(cols.size()) - 1;
}

namespace {

class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opt) : p_(p), opt_(opt) {
    m_ = p.rows;
    n_ = static_cast<int>(p.cols.size());
    for (int i = 0; i < m_; ++i)
      if (p.rhs[i] < 0.0)
        throw SolverFailure("solve_lp: negative right-hand side (slack basis infeasible)");
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;  // slacks
    in_basis_.assign(n_ + m_, false);
    for (int j : basis_) in_basis_[j] = true;
    xb_ = p.rhs;
  }

  LpSolution run() {
    const long cap = opt_.max_iterations > 0
                         ? opt_.max_iterations
                         : 20000L + 40L * m_ + 2L * n_;
    long iter = 0;
    long stalled = 0;
    double last_obj = objective();
    int since_refactor = 0;

    while (true) {
      if (++iter > cap)
        throw SolverFailure("solve_lp: iteration cap reached after " +
                            std::to_string(iter - 1) + " pivots, objective " +
                            std::to_string(objective()));
      const bool bland = stalled > 60;
      const Eigen::VectorXd y = binv_.transpose() * basic_costs();
      const int entering = price(y, bland);
      if (entering < 0) break;  // optimal

      const Eigen::VectorXd w = direction(entering);
      const int leave_pos = ratio_test(w, bland);
      if (leave_pos < 0)
        throw SolverFailure("solve_lp: unbounded direction at iteration " +
                            std::to_string(iter));

      pivot(entering, leave_pos, w);
      if (++since_refactor >= opt_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
      const double obj = objective();
      if (obj > last_obj + 1e-12 * (1.0 + std::abs(last_obj))) {
        stalled = 0;
        last_obj = obj;
      } else {
        ++stalled;
      }
    }

    refactor();  // clean inverse for the reported solution
    LpSolution sol;
    sol.iterations = iter - 1;
    sol.primal = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) sol.primal[basis_[i]] = std::max(xb_[i], 0.0);
    sol.value = objective();
    Eigen::VectorXd y = binv_.transpose() * basic_costs();
    // Dual multipliers are nonnegative for <= rows in a max problem; clip
    // the roundoff negatives.
    sol.row_duals = y.cwiseMax(0.0);
    sol.dual_value = y.dot(p_.rhs);
    return sol;
  }

 private:
  Eigen::VectorXd basic_costs() const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = basis_[i] < n_ ? p_.obj[basis_[i]] : 0.0;
    return cb;
  }

  double objective() const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) v += p_.obj[basis_[i]] * xb_[i];
    return v;
  }

  double reduced_cost(int j, const Eigen::VectorXd& y) const {
    if (j < n_) {
      double d = p_.obj[j];
      for (const auto& [row, coef] : p_.cols[j]) d -= y[row] * coef;
      return d;
    }
    return -y[j - n_];  // slack
  }

  // Entering column, or -1 at optimality.
  int price(const Eigen::VectorXd& y, bool bland) const {
    int best = -1;
    double best_d = opt_.optimality_tol;
    for (int j = 0; j < n_ + m_; ++j) {
      if (in_basis_[j]) continue;
      const double d = reduced_cost(j, y);
      if (d > best_d) {
        if (bland) return j;
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  Eigen::VectorXd direction(int j) const {
    if (j < n_) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
      for (const auto& [row, coef] : p_.cols[j]) w += coef * binv_.col(row);
      return w;
    }
    return binv_.col(j - n_);
  }

  int ratio_test(const Eigen::VectorXd& w, bool bland) const {
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (w[i] <= opt_.pivot_tol) continue;
      const double ratio = std::max(xb_[i], 0.0) / w[i];
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           (bland ? basis_[i] < basis_[leave] : w[i] > w[leave]))) {
        leave = i;
        best_ratio = ratio;
      }
    }
    return leave;
  }

  void pivot(int entering, int leave_pos, const Eigen::VectorXd& w) {
    in_basis_[basis_[leave_pos]] = false;
    basis_[leave_pos] = entering;
    in_basis_[entering] = true;
    const double piv = w[leave_pos];
    binv_.row(leave_pos) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_pos) continue;
      const double f = w[i];
      if (f != 0.0) binv_.row(i) -= (f / piv) * binv_.row(leave_pos);
    }
    xb_ = binv_ * p_.rhs;
  }

  void refactor() {
    Eigen::MatrixXd b(m_, m_);
    b.setZero();
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < n_) {
        for (const auto& [row, coef] : p_.cols[j]) b(row, i) = coef;
      } else {
        b(j - n_, i) = 1.0;
      }
    }
    binv_ = b.partialPivLu().inverse();
    xb_ = binv_ * p_.rhs;
  }

  const LpProblem& p_;
  const LpOptions& opt_;
  int m_ = 0, n_ = 0;
  Eigen::MatrixXd binv_;
  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  Eigen::VectorXd xb_;
};

void write_number(std::ostream& os, double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  os << buf;
}

void write_terms(std::ostream& os, const LpProblem& p,
                 const std::vector<std::pair<int, double>>& terms, int precision) {
  bool first = true;
  for (const auto& [col, coef] : terms) {
    if (coef == 0.0) continue;
    if (first) {
      if (coef < 0.0) os << "- ";
      first = false;
    } else {
      os << (coef < 0.0 ? " - " : " + ");
    }
    write_number(os, std::abs(coef), precision);
    os << ' ' << p.col_names[col];
  }
  if (first) os << "0 " << (p.col_names.empty() ? "x0" : p.col_names[0]);
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  if (problem.rows == 0 || problem.cols.empty()) {
    LpSolution sol;
    sol.primal = Eigen::VectorXd::Zero(static_cast<int>(problem.cols.size()));
    sol.row_duals = Eigen::VectorXd::Zero(problem.rows);
    return sol;
  }
  Simplex simplex(problem, options);
  return simplex.run();
}

void write_lp_format(const LpProblem& p, std::ostream& os, int precision) {
  os << "\\ LP export (" << p.rows << " rows, " << p.cols.size() << " cols)\n";
  os << "Maximize\n obj: ";
  std::vector<std::pair<int, double>> obj_terms;
  for (int j = 0; j < static_cast<int>(p.cols.size()); ++j)
    obj_terms.push_back({j, p.obj[j]});
  write_terms(os, p, obj_terms, precision);
  os << "\nSubject To\n";
  // Rebuild rows from the column-sparse storage.
  std::vector<std::vector<std::pair<int, double>>> rows(p.rows);
  for (int j = 0; j < static_cast<int>(p.cols.size()); ++j)
    for (const auto& [row, coef] : p.cols[j]) rows[row].push_back({j, coef});
  for (int i = 0; i < p.rows; ++i) {
    os << ' ' << p.row_names[i] << ": ";
    write_terms(os, p, rows[i], precision);
    os << " <= ";
    write_number(os, p.rhs[i], precision);
    os << '\n';
  }
  os << "Bounds\n";
  for (const auto& name : p.col_names) os << ' ' << name << " >= 0\n";
  os << "End\n";
}

}  // namespace iballoc
