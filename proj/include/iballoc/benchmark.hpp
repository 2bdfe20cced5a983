#pragma once

#include "iballoc/engine.hpp"
#include "iballoc/lp.hpp"
#include "iballoc/model.hpp"
#include "iballoc/penalty.hpp"

namespace iballoc {

// Deterministic LP relaxation whose optimum is OPT. Single-reward instances
// keep the z_i variables explicit (columns 0..n-1, then s_{a,t} blocks per
// period); multi-price instances have s_{a,t} columns only.
LpProblem build_primal_lp(const Instance& inst);

struct DualCertificate {
  Eigen::VectorXd lambda;  // per resource
  Eigen::VectorXd gamma;   // per period
};

// Dual objective sum_i b_i lambda_i + sum_t gamma_t.
double dual_objective(const DualCertificate& cert, const Instance& inst);

// Maps the solver's row multipliers back to (lambda, gamma).
DualCertificate lp_dual_certificate(const Instance& inst, const LpSolution& sol);

// Realized dual variables of a completed trace: Lambda_i from the terminal
// consumption fraction, Gamma_t the best auxiliary value at the start of
// each period, both recomputed from the inventory trajectory.
DualCertificate dual_from_trace(const SimulationTrace& trace, const Instance& inst,
                                const PenaltySchedule& schedule);

struct FeasibilityReport {
  bool feasible = true;
  double worst_violation = 0.0;
  int worst_action = -1;
  int worst_period = -1;  // 1-based; 0 marks a sign/bound violation
};

// Verifies every dual constraint at the given tolerance.
FeasibilityReport check_dual_feasibility(const DualCertificate& cert,
                                         const Instance& inst, double tol = 1e-9);

// Exact value of the optimal online policy that knows the law and the
// arrival sequence, by backward induction over inventory states. Guarded by
// a state-space budget.
double brute_force_opt(const Instance& inst, double budget = 1e7);

struct GuaranteeReport {
  double opt = 0.0;
  double factor = 0.0;
  long replicates = 0;
  double mean_alg = 0.0, se_alg = 0.0;
  double mean_reg = 0.0, se_reg = 0.0;
  // opt - factor * mean_alg - mean_reg; <= 0 up to Monte-Carlo error.
  double slack = 0.0;
};

// Theorem-1 / Theorem-3 inequality report over replicate traces.
GuaranteeReport guarantee_gap_report(const std::vector<SimulationTrace>& traces,
                                     const Instance& inst,
                                     const PenaltySchedule& schedule);

}  // namespace iballoc
