#include "iballoc/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace iballoc {

PhiCurve PhiCurve::scaled_psi(double scale) {
  if (!(scale > 0.0)) throw ConfigError("PhiCurve: scale must be positive");
  PhiCurve c;
  c.scale_ = scale;
  return c;
}

PhiCurve PhiCurve::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ConfigError("PhiCurve: need at least two knots");
  if (std::abs(knots.front().first) > 1e-12 || std::abs(knots.front().second) > 1e-12)
    throw ConfigError("PhiCurve: table must start at (0, 0)");
  if (std::abs(knots.back().first - 1.0) > 1e-12)
    throw ConfigError("PhiCurve: table must end at w = 1");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first) || !(knots[i].second > knots[i - 1].second))
      throw ConfigError("PhiCurve: knots must be strictly increasing");
  }
  knots.front() = {0.0, 0.0};
  knots.back().first = 1.0;
  PhiCurve c;
  c.knots_ = std::move(knots);
  return c;
}

double PhiCurve::operator()(double w) const {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("PhiCurve: argument outside [0,1]");
  if (knots_.empty()) return scale_ * psi(w);
  const auto it = std::lower_bound(
      knots_.begin(), knots_.end(), w,
      [](const std::pair<double, double>& k, double v) { return k.first < v; });
  if (it == knots_.begin()) return it->second;
  if (it == knots_.end()) return knots_.back().second;
  const auto& [w1, p1] = *it;
  const auto& [w0, p0] = *(it - 1);
  if (w == w1) return p1;
  return p0 + (p1 - p0) * (w - w0) / (w1 - w0);
}

double PhiCurve::max_value() const {
  return knots_.empty() ? scale_ : knots_.back().second;
}

double MultiPriceSchedule::min_alpha1() const {
  double m = std::numeric_limits<double>::infinity();
  for (double a : alpha1) m = std::min(m, a);
  return m;
}

PenaltySchedule default_schedule(const Instance& inst) {
  if (inst.mode == Mode::kSingleReward) return SinglePriceSchedule{};
  MultiPriceSchedule sched;
  for (const auto& res : inst.resources) {
    sched.phi.push_back(PhiCurve::scaled_psi(res.prices.back()));
    sched.alpha1.push_back(1.0);
  }
  return sched;
}

void validate_schedule(const PenaltySchedule& schedule, const Instance& inst) {
  if (inst.mode == Mode::kSingleReward) {
    if (!std::holds_alternative<SinglePriceSchedule>(schedule))
      throw ConfigError("single-reward instance requires a single-price schedule");
    return;
  }
  const auto* multi = std::get_if<MultiPriceSchedule>(&schedule);
  if (!multi) throw ConfigError("multi-price instance requires a multi-price schedule");
  if (static_cast<int>(multi->phi.size()) != inst.num_resources() ||
      static_cast<int>(multi->alpha1.size()) != inst.num_resources())
    throw ConfigError("schedule must cover every resource");
  for (int i = 0; i < inst.num_resources(); ++i) {
    if (!(multi->alpha1[i] > 0.0)) throw ConfigError("alpha^(1) must be positive");
    if (std::abs(multi->phi[i].max_value() - inst.resources[i].prices.back()) > 1e-9)
      throw ConfigError("Phi_i(1) must equal max P_i");
  }
}

double virtual_reward_multiprice(double price, const PenaltySchedule& schedule,
                                 const Instance& inst, int resource, int consumed) {
  const auto* multi = std::get_if<MultiPriceSchedule>(&schedule);
  if (!multi) throw ConfigError("virtual_reward_multiprice needs a multi-price schedule");
  const auto& prices = inst.resources.at(resource).prices;
  if (std::find(prices.begin(), prices.end(), price) == prices.end())
    throw MalformedInstance("price not in the resource's declared price set");
  const int b = inst.resources[resource].inventory;
  if (consumed < 0 || consumed > b)
    throw StateCorruption("virtual_reward_multiprice: consumption outside [0, b]");
  return price - multi->phi[resource](static_cast<double>(consumed) / b);
}

double guarantee_factor(const Instance& inst, const PenaltySchedule& schedule) {
  if (const auto* multi = std::get_if<MultiPriceSchedule>(&schedule))
    return competitive_factor<double>(inst.b_min(), multi->min_alpha1());
  return competitive_factor<double>(inst.b_min());
}

Eigen::VectorXd virtual_rewards(const Instance& inst, const PenaltySchedule& schedule,
                                const Eigen::VectorXi& consumed) {
  if (inst.mode == Mode::kSingleReward) {
    Eigen::VectorXd r(inst.num_resources());
    for (int i = 0; i < inst.num_resources(); ++i)
      r[i] = discounted_reward(inst.resources[i].reward, consumed[i],
                               inst.resources[i].inventory);
    return r;
  }
  const auto* multi = std::get_if<MultiPriceSchedule>(&schedule);
  if (!multi) throw ConfigError("multi-price instance requires a multi-price schedule");
  const auto& combos = inst.assortments().combos;
  Eigen::VectorXd r(static_cast<int>(combos.size()));
  for (int c = 0; c < r.size(); ++c) {
    const auto& combo = combos[c];
    const int b = inst.resources[combo.resource].inventory;
    r[c] = combo.price -
           multi->phi[combo.resource](static_cast<double>(consumed[combo.resource]) / b);
  }
  return r;
}

}  // namespace iballoc
