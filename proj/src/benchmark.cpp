#include "iballoc/benchmark.hpp"

#include <algorithm>
#include <cmath>

namespace iballoc {

namespace {

// Per-period expected consumption of every action, indexed [a](resource/combo).
std::vector<Eigen::VectorXd> consumption_table(const Instance& inst, const Context& x) {
  const int count = action_count(inst);
  std::vector<Eigen::VectorXd> q(count);
  for (int a = 0; a < count; ++a) q[a] = expected_consumption(inst, x, Action(a));
  return q;
}

}  // namespace

LpProblem build_primal_lp(const Instance& inst) {
  inst.validate();
  LpProblem lp;
  const int n = inst.num_resources();
  const int T = inst.horizon;
  const int A = action_count(inst);

  if (inst.mode == Mode::kSingleReward) {
    for (int i = 0; i < n; ++i) lp.add_row(0.0, "couple_" + std::to_string(i));
    for (int i = 0; i < n; ++i)
      lp.add_row(inst.resources[i].inventory, "cap_" + std::to_string(i));
    for (int t = 1; t <= T; ++t) lp.add_row(1.0, "period_" + std::to_string(t));

    for (int i = 0; i < n; ++i) {
      const int col = lp.add_col(inst.resources[i].reward, "z_" + std::to_string(i));
      lp.set(col, i, 1.0);
      lp.set(col, n + i, 1.0);
    }
    for (int t = 1; t <= T; ++t) {
      const auto q = consumption_table(inst, inst.arrivals[t - 1]);
      for (int a = 0; a < A; ++a) {
        const int col =
            lp.add_col(0.0, "s_" + std::to_string(a) + "_" + std::to_string(t));
        for (int i = 0; i < n; ++i)
          if (q[a][i] != 0.0) lp.set(col, i, -q[a][i]);
        lp.set(col, 2 * n + (t - 1), 1.0);
      }
    }
    return lp;
  }

  const auto& fam = inst.assortments();
  for (int i = 0; i < n; ++i)
    lp.add_row(inst.resources[i].inventory, "inv_" + std::to_string(i));
  for (int t = 1; t <= T; ++t) lp.add_row(1.0, "period_" + std::to_string(t));

  for (int t = 1; t <= T; ++t) {
    const auto q = consumption_table(inst, inst.arrivals[t - 1]);
    for (int a = 0; a < A; ++a) {
      double revenue = 0.0;
      Eigen::VectorXd per_resource = Eigen::VectorXd::Zero(n);
      for (int c : fam.sets[a]) {
        revenue += q[a][c] * fam.combos[c].price;
        per_resource[fam.combos[c].resource] += q[a][c];
      }
      const int col =
          lp.add_col(revenue, "s_" + std::to_string(a) + "_" + std::to_string(t));
      for (int i = 0; i < n; ++i)
        if (per_resource[i] != 0.0) lp.set(col, i, per_resource[i]);
      lp.set(col, n + (t - 1), 1.0);
    }
  }
  return lp;
}

double dual_objective(const DualCertificate& cert, const Instance& inst) {
  double v = 0.0;
  for (int i = 0; i < inst.num_resources(); ++i)
    v += inst.resources[i].inventory * cert.lambda[i];
  return v + cert.gamma.sum();
}

DualCertificate lp_dual_certificate(const Instance& inst, const LpSolution& sol) {
  const int n = inst.num_resources();
  const int T = inst.horizon;
  DualCertificate cert;
  cert.lambda.resize(n);
  cert.gamma.resize(T);
  if (inst.mode == Mode::kSingleReward) {
    for (int i = 0; i < n; ++i) cert.lambda[i] = sol.row_duals[n + i];
    for (int t = 0; t < T; ++t) cert.gamma[t] = sol.row_duals[2 * n + t];
  } else {
    for (int i = 0; i < n; ++i) cert.lambda[i] = sol.row_duals[i];
    for (int t = 0; t < T; ++t) cert.gamma[t] = sol.row_duals[n + t];
  }
  return cert;
}

DualCertificate dual_from_trace(const SimulationTrace& trace, const Instance& inst,
                                const PenaltySchedule& schedule) {
  if (static_cast<int>(trace.periods.size()) != inst.horizon)
    throw MalformedTrace("trace does not cover the instance horizon");
  validate_schedule(schedule, inst);
  const int n = inst.num_resources();

  DualCertificate cert;
  cert.lambda = Eigen::VectorXd::Zero(n);
  cert.gamma = Eigen::VectorXd::Zero(inst.horizon);

  const Eigen::VectorXi terminal = inst.horizon > 0
                                       ? trace.periods.back().inventory_after
                                       : Eigen::VectorXi::Zero(n);
  if (terminal.size() != n) throw MalformedTrace("trace inventory dimension mismatch");
  for (int i = 0; i < n; ++i) {
    const double frac =
        static_cast<double>(terminal[i]) / inst.resources[i].inventory;
    if (inst.mode == Mode::kSingleReward) {
      cert.lambda[i] = inst.resources[i].reward * psi(frac);
    } else {
      cert.lambda[i] = std::get<MultiPriceSchedule>(schedule).phi[i](frac);
    }
  }

  Eigen::VectorXi prev = Eigen::VectorXi::Zero(n);
  for (int t = 1; t <= inst.horizon; ++t) {
    const Context& x = inst.arrivals[t - 1];
    const Eigen::VectorXd vr = virtual_rewards(inst, schedule, prev);
    const Action a_star = best_action(inst, x, vr);
    cert.gamma[t - 1] = std::max(
        a_star.is_none() ? 0.0 : expected_auxiliary_reward(inst, x, a_star, vr), 0.0);
    prev = trace.periods[t - 1].inventory_after;
  }
  return cert;
}

FeasibilityReport check_dual_feasibility(const DualCertificate& cert,
                                         const Instance& inst, double tol) {
  FeasibilityReport report;
  const int n = inst.num_resources();
  if (cert.lambda.size() != n || cert.gamma.size() != inst.horizon)
    throw MalformedInstance("certificate dimensions do not match the instance");

  auto note = [&](double violation, int a, int t) {
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_action = a;
      report.worst_period = t;
    }
    if (violation > tol) report.feasible = false;
  };

  for (int i = 0; i < n; ++i) {
    note(-cert.lambda[i], -1, 0);
    if (inst.mode == Mode::kSingleReward)
      note(cert.lambda[i] - inst.resources[i].reward, -1, 0);
  }
  for (int t = 0; t < inst.horizon; ++t) note(-cert.gamma[t], -1, t + 1);

  const int A = action_count(inst);
  const auto* fam =
      inst.mode == Mode::kMultiPrice ? &inst.assortments() : nullptr;
  for (int t = 1; t <= inst.horizon; ++t) {
    const auto q = consumption_table(inst, inst.arrivals[t - 1]);
    for (int a = 0; a < A; ++a) {
      double rhs = 0.0;
      if (inst.mode == Mode::kSingleReward) {
        for (int i = 0; i < n; ++i)
          rhs += q[a][i] * (inst.resources[i].reward - cert.lambda[i]);
      } else {
        for (int c : fam->sets[a])
          rhs += q[a][c] * (fam->combos[c].price - cert.lambda[fam->combos[c].resource]);
      }
      note(rhs - cert.gamma[t - 1], a, t);
    }
  }
  return report;
}

double brute_force_opt(const Instance& inst, double budget) {
  inst.validate();
  const int n = inst.num_resources();
  const int A = action_count(inst);

  double states = 1.0;
  std::vector<long> stride(n);
  long total = 1;
  for (int i = 0; i < n; ++i) {
    stride[i] = total;
    total *= inst.resources[i].inventory + 1;
    states = static_cast<double>(total);
  }
  if (states * A * std::max(inst.horizon, 1) > budget)
    throw SizeError("brute_force_opt: state space exceeds the budget");

  const bool multi = inst.mode == Mode::kMultiPrice;
  const auto* fam = multi ? &inst.assortments() : nullptr;

  auto decode = [&](long s, Eigen::VectorXi& out) {
    for (int i = 0; i < n; ++i)
      out[i] = static_cast<int>((s / stride[i]) % (inst.resources[i].inventory + 1));
  };

  std::vector<double> next(total, 0.0), cur(total, 0.0);
  Eigen::VectorXi counters(n);
  for (int t = inst.horizon; t >= 1; --t) {
    const Context& x = inst.arrivals[t - 1];
    // Support sets per action are state-independent; gate rewards per state.
    std::vector<std::vector<std::pair<Outcome, double>>> support(A);
    for (int a = 0; a < A; ++a) support[a] = outcome_support(inst, x, Action(a));

    for (long s = 0; s < total; ++s) {
      decode(s, counters);
      // Multi-price mode always has the empty assortment playable, so the
      // max below is over a nonempty set in both modes.
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        if (multi) {
          bool playable = true;
          for (int c : fam->sets[a])
            if (counters[fam->combos[c].resource] >=
                inst.resources[fam->combos[c].resource].inventory) {
              playable = false;
              break;
            }
          if (!playable) continue;
        }
        double value = 0.0;
        for (const auto& [y, p] : support[a]) {
          double reward = 0.0;
          long s2 = s;
          for (int idx : y.consumed) {
            const int res = multi ? fam->combos[idx].resource : idx;
            const int used = static_cast<int>((s2 / stride[res]) %
                                              (inst.resources[res].inventory + 1));
            if (used < inst.resources[res].inventory) {
              reward += multi ? fam->combos[idx].price : inst.resources[res].reward;
              s2 += stride[res];
            }
          }
          value += p * (reward + next[s2]);
        }
        best = std::max(best, value);
      }
      cur[s] = best;
    }
    std::swap(cur, next);
  }
  return next[0];
}

GuaranteeReport guarantee_gap_report(const std::vector<SimulationTrace>& traces,
                                     const Instance& inst,
                                     const PenaltySchedule& schedule) {
  if (traces.size() < 30)
    throw StatisticalPowerError("guarantee_gap_report needs at least 30 replicates");
  GuaranteeReport report;
  report.replicates = static_cast<long>(traces.size());
  report.opt = solve_lp(build_primal_lp(inst)).value;
  report.factor = guarantee_factor(inst, schedule);

  MeanSe alg, reg;
  for (const auto& trace : traces) {
    alg.add(trace.alg);
    reg.add(trace.reg);
  }
  report.mean_alg = alg.mean;
  report.se_alg = alg.se();
  report.mean_reg = reg.mean;
  report.se_reg = reg.se();
  report.slack = report.opt - report.factor * report.mean_alg - report.mean_reg;
  return report;
}

}  // namespace iballoc
