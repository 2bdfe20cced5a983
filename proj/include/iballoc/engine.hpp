#pragma once

#include <optional>
#include <vector>

#include "iballoc/learners.hpp"
#include "iballoc/model.hpp"
#include "iballoc/penalty.hpp"

namespace iballoc {

struct PeriodRecord {
  int t = 0;  // 1-based
  Eigen::VectorXd virtual_rewards;
  Action action;
  Outcome outcome;       // raw sampled outcome (pre inventory gating)
  double reward = 0.0;   // reward actually earned
  double regret_gap = 0.0;
  Eigen::VectorXi inventory_after;
};

struct SimulationTrace {
  std::vector<PeriodRecord> periods;
  double alg = 0.0;  // total earned reward
  double reg = 0.0;  // Eq.-2 regret along this path
  // Base action family restriction (conservative baseline); empty = full family.
  std::optional<std::vector<int>> restricted_family;
};

// The integrated algorithm: discounted virtual rewards, oracle query, outcome
// sampling, consumption, learner update, and per-period regret accounting.
SimulationTrace run_integrated(const Instance& inst, Learner& learner,
                               const PenaltySchedule& schedule, Rng& rng);

// Same loop with undiscounted rewards (gated to zero on depleted resources).
SimulationTrace run_greedy_baseline(const Instance& inst, Learner& learner, Rng& rng);

// Integrated loop restricted to assortments of highest-price combinations
// only. Requires a multi-price instance with exactly two prices per resource.
SimulationTrace run_conservative_baseline(const Instance& inst, Learner& learner,
                                          const PenaltySchedule& schedule, Rng& rng);

// Recomputes Eq. 2 from the recorded virtual rewards and true-law
// expectations; equals the trace's stored reg up to accumulation tolerance.
double compute_regret(const SimulationTrace& trace, const Instance& inst);

}  // namespace iballoc
