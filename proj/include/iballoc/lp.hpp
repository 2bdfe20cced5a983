#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "iballoc/common.hpp"

namespace iballoc {

// max c'x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is
// feasible. Columns are stored sparsely; the basis inverse is dense.
struct LpProblem {
  int rows = 0;
  Eigen::VectorXd rhs;                                      // b
  std::vector<double> obj;                                  // c per column
  std::vector<std::vector<std::pair<int, double>>> cols;    // (row, coef)
  std::vector<std::string> row_names, col_names;            // for export

  int add_row(double b, std::string name = {});
  int add_col(double c, std::string name = {});
  void set(int col, int row, double coef) { cols[col].push_back({row, coef}); }
};

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd primal;     // structural variables
  Eigen::VectorXd row_duals;  // one multiplier per row, >= 0
  double dual_value = 0.0;    // should match value up to tolerance
  long iterations = 0;
};

struct LpOptions {
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  int refactor_every = 200;
  long max_iterations = 0;  // 0 = automatic from problem size
};

// Dense revised simplex, Dantzig pricing with Bland's rule engaged on
// degenerate stalls. Throws SolverFailure on stall or iteration exhaustion.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

// CPLEX-style LP text format with fixed decimal precision.
void write_lp_format(const LpProblem& problem, std::ostream& os, int precision = 12);

}  // namespace iballoc
