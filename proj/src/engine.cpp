#include "iballoc/engine.hpp"

#include <algorithm>
#include <cmath>

namespace iballoc {

namespace {

constexpr double kGapTolerance = 1e-9;

enum class RewardRule { kDiscounted, kUndiscounted };

Eigen::VectorXd undiscounted_rewards(const Instance& inst,
                                     const Eigen::VectorXi& consumed) {
  if (inst.mode == Mode::kSingleReward) {
    Eigen::VectorXd r(inst.num_resources());
    for (int i = 0; i < inst.num_resources(); ++i)
      r[i] = consumed[i] < inst.resources[i].inventory ? inst.resources[i].reward : 0.0;
    return r;
  }
  const auto& combos = inst.assortments().combos;
  Eigen::VectorXd r(static_cast<int>(combos.size()));
  for (int c = 0; c < r.size(); ++c) {
    const auto& combo = combos[c];
    r[c] = consumed[combo.resource] < inst.resources[combo.resource].inventory
               ? combo.price
               : 0.0;
  }
  return r;
}

// Resources touched by each assortment, for the availability filter.
std::vector<std::vector<int>> set_resources(const AssortmentFamily& fam) {
  std::vector<std::vector<int>> out(fam.sets.size());
  for (std::size_t s = 0; s < fam.sets.size(); ++s) {
    for (int c : fam.sets[s]) out[s].push_back(fam.combos[c].resource);
    std::sort(out[s].begin(), out[s].end());
    out[s].erase(std::unique(out[s].begin(), out[s].end()), out[s].end());
  }
  return out;
}

SimulationTrace run_loop(const Instance& inst, Learner& learner,
                         const PenaltySchedule& schedule, RewardRule rule,
                         std::optional<std::vector<int>> base_allowed, Rng& rng) {
  inst.validate();
  validate_schedule(schedule, inst);

  SimulationTrace trace;
  trace.restricted_family = base_allowed;
  trace.periods.reserve(inst.horizon);
  InventoryState state = InventoryState::initial(inst);

  const bool multi = inst.mode == Mode::kMultiPrice;
  std::vector<std::vector<int>> usage;
  std::vector<int> full_family;
  if (multi) {
    usage = set_resources(inst.assortments());
    if (!base_allowed) {
      full_family.resize(inst.assortments().sets.size());
      for (std::size_t s = 0; s < full_family.size(); ++s) full_family[s] = (int)s;
    }
  }
  const std::vector<int>& base =
      base_allowed ? *base_allowed : full_family;  // multi mode only

  std::vector<int> playable;
  for (int t = 1; t <= inst.horizon; ++t) {
    const Context& x = inst.arrivals[t - 1];
    const Eigen::VectorXd vr = rule == RewardRule::kDiscounted
                                   ? virtual_rewards(inst, schedule, state.consumed)
                                   : undiscounted_rewards(inst, state.consumed);

    // Multi-price offers may only contain combinations of resources with
    // remaining inventory; the auxiliary problem itself is unfiltered.
    const std::vector<int>* allowed = nullptr;
    if (multi) {
      playable.clear();
      for (int s : base) {
        bool ok = true;
        for (int i : usage[s])
          if (state.depleted(inst, i)) {
            ok = false;
            break;
          }
        if (ok) playable.push_back(s);
      }
      allowed = &playable;
    } else if (base_allowed) {
      allowed = &*base_allowed;
    }

    OracleInput input;
    input.period = t;
    input.context = &x;
    input.virtual_rewards = &vr;
    input.allowed_actions = allowed;
    const Action a = learner.select(input, rng);

    const Action a_star = best_action(
        inst, x, vr, base_allowed ? &*base_allowed : nullptr);
    const double best_value =
        a_star.is_none() ? 0.0 : expected_auxiliary_reward(inst, x, a_star, vr);
    const double played_value =
        a.is_none() ? 0.0 : expected_auxiliary_reward(inst, x, a, vr);
    double gap = best_value - played_value;
    if (gap < -kGapTolerance)
      throw StateCorruption("per-period regret gap below -1e-9");
    gap = std::max(gap, 0.0);

    const Outcome y = sample_outcome(inst, x, a, rng);
    const double reward = apply_outcome(state, y, inst);
    learner.update(x, a, y);

    PeriodRecord rec;
    rec.t = t;
    rec.virtual_rewards = vr;
    rec.action = a;
    rec.outcome = y;
    rec.reward = reward;
    rec.regret_gap = gap;
    rec.inventory_after = state.consumed;
    trace.periods.push_back(std::move(rec));
    trace.alg += reward;
    trace.reg += gap;
  }
  return trace;
}

}  // namespace

SimulationTrace run_integrated(const Instance& inst, Learner& learner,
                               const PenaltySchedule& schedule, Rng& rng) {
  return run_loop(inst, learner, schedule, RewardRule::kDiscounted, std::nullopt, rng);
}

SimulationTrace run_greedy_baseline(const Instance& inst, Learner& learner, Rng& rng) {
  return run_loop(inst, learner, default_schedule(inst), RewardRule::kUndiscounted,
                  std::nullopt, rng);
}

SimulationTrace run_conservative_baseline(const Instance& inst, Learner& learner,
                                          const PenaltySchedule& schedule, Rng& rng) {
  if (inst.mode != Mode::kMultiPrice)
    throw ConfigError("conservative baseline requires a multi-price instance");
  for (const auto& res : inst.resources)
    if (res.prices.size() != 2)
      throw ConfigError("conservative baseline requires exactly two prices per resource");

  const auto& fam = inst.assortments();
  std::vector<int> high_only;
  for (int s = 0; s < static_cast<int>(fam.sets.size()); ++s) {
    bool ok = true;
    for (int c : fam.sets[s]) {
      const auto& combo = fam.combos[c];
      if (combo.price != inst.resources[combo.resource].prices.back()) {
        ok = false;
        break;
      }
    }
    if (ok) high_only.push_back(s);
  }
  return run_loop(inst, learner, schedule, RewardRule::kDiscounted,
                  std::move(high_only), rng);
}

double compute_regret(const SimulationTrace& trace, const Instance& inst) {
  const std::vector<int>* restricted =
      trace.restricted_family ? &*trace.restricted_family : nullptr;
  double total = 0.0;
  for (const auto& rec : trace.periods) {
    if (rec.t < 1 || rec.t > inst.horizon)
      throw MalformedTrace("trace period outside the instance horizon");
    if (rec.virtual_rewards.size() == 0)
      throw MalformedTrace("trace period is missing virtual rewards");
    const Context& x = inst.arrivals[rec.t - 1];
    const Action a_star = best_action(inst, x, rec.virtual_rewards, restricted);
    const double best_value =
        a_star.is_none() ? 0.0
                         : expected_auxiliary_reward(inst, x, a_star, rec.virtual_rewards);
    const double played_value =
        rec.action.is_none()
            ? 0.0
            : expected_auxiliary_reward(inst, x, rec.action, rec.virtual_rewards);
    double gap = best_value - played_value;
    if (gap < -kGapTolerance) throw MalformedTrace("recomputed regret gap below -1e-9");
    total += std::max(gap, 0.0);
  }
  return total;
}

}  // namespace iballoc
