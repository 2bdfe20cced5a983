#include "iballoc/model.hpp"

#include <algorithm>
#include <cmath>

namespace iballoc {

namespace {

bool is_binary(const Context& x) {
  return (x.array() == 0.0 || x.array() == 1.0).all();
}

}  // namespace

AssortmentFamily all_subsets_family(std::vector<Combo> combos) {
  AssortmentFamily fam;
  fam.combos = std::move(combos);
  const int m = static_cast<int>(fam.combos.size());
  if (m > 16) throw SizeError("all_subsets_family: too many combos to enumerate");
  std::vector<std::vector<int>> sets;
  sets.reserve(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> s;
    for (int j = 0; j < m; ++j)
      if (mask & (1u << j)) s.push_back(j);
    sets.push_back(std::move(s));
  }
  std::sort(sets.begin(), sets.end());
  fam.sets = std::move(sets);
  return fam;
}

bool Outcome::contains(int idx) const {
  return std::binary_search(consumed.begin(), consumed.end(), idx);
}

int TabularLaw::context_id(const Context& x) const {
  for (int c = 0; c < static_cast<int>(contexts.size()); ++c) {
    if (contexts[c].size() == x.size() && contexts[c] == x) return c;
  }
  return -1;
}

double Instance::r_max() const {
  double r = 0.0;
  for (const auto& res : resources) r = std::max(r, res.max_price());
  return r;
}

int Instance::b_min() const {
  int b = std::numeric_limits<int>::max();
  for (const auto& res : resources) b = std::min(b, res.inventory);
  return resources.empty() ? 0 : b;
}

const MatchingFamily& Instance::matching() const {
  const auto* fam = std::get_if<MatchingFamily>(&family);
  if (!fam) throw MalformedInstance("instance does not use a matching action family");
  return *fam;
}

const AssortmentFamily& Instance::assortments() const {
  const auto* fam = std::get_if<AssortmentFamily>(&family);
  if (!fam) throw MalformedInstance("instance does not use an assortment family");
  return *fam;
}

int action_count(const Instance& inst) {
  if (const auto* m = std::get_if<MatchingFamily>(&inst.family))
    return inst.num_resources() * m->arms_per_resource;
  return static_cast<int>(inst.assortments().sets.size());
}

std::pair<int, int> matching_arm(const Instance& inst, Action a) {
  const int K = inst.matching().arms_per_resource;
  if (a.is_none() || a.index >= inst.num_resources() * K)
    throw MalformedInstance("matching_arm: action out of range");
  return {a.index / K, a.index % K};
}

void Instance::validate() const {
  if (resources.empty()) throw MalformedInstance("instance has no resources");
  for (const auto& res : resources) {
    if (res.inventory < 1) throw MalformedInstance("inventory must be >= 1");
    if (mode == Mode::kSingleReward) {
      if (!(res.reward > 0.0)) throw MalformedInstance("reward must be positive");
    } else {
      if (res.prices.empty()) throw MalformedInstance("price set must be nonempty");
      for (std::size_t p = 0; p < res.prices.size(); ++p) {
        if (!(res.prices[p] >= 0.0)) throw MalformedInstance("prices must be nonnegative");
        if (p > 0 && !(res.prices[p] > res.prices[p - 1]))
          throw MalformedInstance("price sets must be strictly ascending");
      }
    }
  }
  if (horizon != static_cast<int>(arrivals.size()))
    throw MalformedInstance("horizon does not match arrival count");

  if (mode == Mode::kSingleReward) {
    if (std::holds_alternative<AssortmentFamily>(family))
      throw MalformedInstance("assortment family requires multi-price mode");
  } else {
    const auto& fam = assortments();
    if (!std::is_sorted(fam.sets.begin(), fam.sets.end()))
      throw MalformedInstance("assortment sets must be in lexicographic order");
    if (fam.sets.empty() || !fam.sets.front().empty())
      throw MalformedInstance("assortment family must start with the empty set");
    for (const auto& combo : fam.combos) {
      if (combo.resource < 0 || combo.resource >= num_resources())
        throw MalformedInstance("combo references unknown resource");
      const auto& prices = resources[combo.resource].prices;
      if (std::find(prices.begin(), prices.end(), combo.price) == prices.end())
        throw MalformedInstance("combo price not in the resource's price set");
    }
    // Downward closure: every subset of a feasible set obtained by dropping
    // one element must itself be feasible.
    for (const auto& s : fam.sets) {
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<int> sub;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != drop) sub.push_back(s[j]);
        if (!std::binary_search(fam.sets.begin(), fam.sets.end(), sub))
          throw MalformedInstance("assortment family is not downward closed");
      }
    }
  }

  if (const auto* m = std::get_if<MatchingLaw>(&law)) {
    if (m->click_prob.rows() != num_resources())
      throw MalformedInstance("click_prob rows must match resource count");
    if (const auto* fam = std::get_if<MatchingFamily>(&family)) {
      if (m->click_prob.cols() != fam->arms_per_resource)
        throw MalformedInstance("click_prob cols must match arms per resource");
    } else {
      throw MalformedInstance("matching law requires a matching family");
    }
    if ((m->click_prob.array() < 0.0).any() || (m->click_prob.array() > 1.0).any())
      throw MalformedInstance("click probabilities must lie in [0,1]");
    for (const auto& x : arrivals) {
      if (x.size() != num_resources() || !is_binary(x))
        throw MalformedInstance("matching contexts must be binary of length n");
    }
  } else if (const auto* mnl = std::get_if<MnlLaw>(&law)) {
    const auto& fam = assortments();
    if (mnl->beta.rows() != static_cast<int>(fam.combos.size()))
      throw MalformedInstance("mnl beta rows must match combo count");
    if (!(mnl->v0 > 0.0)) throw MalformedInstance("mnl v0 must be positive");
    for (const auto& x : arrivals) {
      if (x.size() != mnl->beta.cols())
        throw MalformedInstance("context dimension does not match mnl beta");
      if (x.size() > 0 && x[0] != 1.0)
        throw MalformedInstance("mnl contexts must carry a leading constant 1");
    }
  } else if (const auto* tab = std::get_if<TabularLaw>(&law)) {
    const int acount = action_count(*this);
    if (tab->table.size() != tab->contexts.size())
      throw MalformedInstance("tabular law table/context size mismatch");
    for (const auto& per_context : tab->table) {
      if (static_cast<int>(per_context.size()) != acount)
        throw MalformedInstance("tabular law must cover every action");
      for (const auto& dist : per_context) {
        double total = 0.0;
        for (const auto& [y, p] : dist) {
          if (p < 0.0) throw MalformedInstance("tabular probabilities must be >= 0");
          if (!std::is_sorted(y.consumed.begin(), y.consumed.end()) ||
              std::adjacent_find(y.consumed.begin(), y.consumed.end()) !=
                  y.consumed.end())
            throw MalformedInstance("outcome indices must be sorted and distinct");
          total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
          throw MalformedInstance("tabular distribution does not sum to 1");
      }
    }
    for (const auto& x : arrivals) {
      if (tab->context_id(x) < 0)
        throw MalformedInstance("arrival context not registered in tabular law");
    }
  }
}

MnlChoiceProbs mnl_choice_prob(const Context& x, const std::vector<int>& offered,
                               const Eigen::MatrixXd& beta, double v0) {
  if (!(v0 > 0.0)) throw MalformedInstance("mnl v0 must be positive");
  if (!x.allFinite()) throw MalformedInstance("mnl context contains non-finite values");
  MnlChoiceProbs out;
  out.purchase = Eigen::VectorXd::Zero(static_cast<int>(offered.size()));
  if (offered.empty()) return out;

  Eigen::VectorXd utils(static_cast<int>(offered.size()));
  for (int j = 0; j < utils.size(); ++j) {
    if (offered[j] < 0 || offered[j] >= beta.rows())
      throw MalformedInstance("mnl_choice_prob: combo index out of range");
    utils[j] = beta.row(offered[j]).dot(x);
  }
  if (!utils.allFinite()) throw MalformedInstance("mnl utilities are non-finite");

  // Shift by the max utility (including the no-purchase log-weight) so the
  // exponentials cannot overflow.
  const double u0 = std::log(v0);
  const double shift = std::max(u0, utils.maxCoeff());
  const Eigen::VectorXd w = (utils.array() - shift).exp();
  const double w0 = std::exp(u0 - shift);
  const double denom = w0 + w.sum();
  out.purchase = w / denom;
  out.no_purchase = w0 / denom;
  return out;
}

Outcome sample_outcome(const Instance& inst, const Context& x, Action a, Rng& rng) {
  Outcome y;
  if (a.is_none()) return y;

  if (const auto* m = std::get_if<MatchingLaw>(&inst.law)) {
    const auto [i, k] = matching_arm(inst, a);
    if (x.size() <= i) throw MalformedInstance("context shorter than resource index");
    const double p = x[i] == 1.0 ? m->click_prob(i, k) : 0.0;
    if (rng.bernoulli(p)) y.consumed.push_back(i);
    return y;
  }
  if (const auto* mnl = std::get_if<MnlLaw>(&inst.law)) {
    const auto& offered = inst.assortments().sets.at(a.index);
    const auto probs = mnl_choice_prob(x, offered, mnl->beta, mnl->v0);
    double u = rng.next_double();
    for (int j = 0; j < probs.purchase.size(); ++j) {
      u -= probs.purchase[j];
      if (u < 0.0) {
        y.consumed.push_back(offered[j]);
        return y;
      }
    }
    return y;  // no purchase
  }
  const auto& tab = std::get<TabularLaw>(inst.law);
  const int c = tab.context_id(x);
  if (c < 0) throw MalformedInstance("unknown context in tabular law");
  if (a.index < 0 || a.index >= static_cast<int>(tab.table[c].size()))
    throw MalformedInstance("unknown action in tabular law");
  const auto& dist = tab.table[c][a.index];
  double u = rng.next_double();
  for (const auto& [outcome, p] : dist) {
    u -= p;
    if (u < 0.0) return outcome;
  }
  return dist.empty() ? y : dist.back().first;
}

Eigen::VectorXd expected_consumption(const Instance& inst, const Context& x, Action a) {
  if (const auto* m = std::get_if<MatchingLaw>(&inst.law)) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(inst.num_resources());
    if (a.is_none()) return q;
    const auto [i, k] = matching_arm(inst, a);
    if (x.size() <= i) throw MalformedInstance("context shorter than resource index");
    q[i] = x[i] == 1.0 ? m->click_prob(i, k) : 0.0;
    return q;
  }
  if (const auto* mnl = std::get_if<MnlLaw>(&inst.law)) {
    const auto& fam = inst.assortments();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<int>(fam.combos.size()));
    if (a.is_none()) return q;
    const auto& offered = fam.sets.at(a.index);
    const auto probs = mnl_choice_prob(x, offered, mnl->beta, mnl->v0);
    for (int j = 0; j < probs.purchase.size(); ++j) q[offered[j]] = probs.purchase[j];
    return q;
  }
  const int dims = inst.mode == Mode::kSingleReward
                       ? inst.num_resources()
                       : static_cast<int>(inst.assortments().combos.size());
  Eigen::VectorXd q = Eigen::VectorXd::Zero(dims);
  for (const auto& [y, p] : outcome_support(inst, x, a)) {
    for (int idx : y.consumed) {
      if (idx >= dims) throw MalformedInstance("outcome index out of range");
      q[idx] += p;
    }
  }
  return q;
}

double expected_auxiliary_reward(const Instance& inst, const Context& x, Action a,
                                 const Eigen::VectorXd& virtual_rewards) {
  const Eigen::VectorXd q = expected_consumption(inst, x, a);
  if (q.size() != virtual_rewards.size())
    throw MalformedInstance("virtual reward vector has the wrong dimension");
  return q.dot(virtual_rewards);
}

std::vector<std::pair<Outcome, double>> outcome_support(const Instance& inst,
                                                        const Context& x, Action a) {
  std::vector<std::pair<Outcome, double>> support;
  if (a.is_none()) {
    support.push_back({Outcome{}, 1.0});
    return support;
  }
  if (const auto* m = std::get_if<MatchingLaw>(&inst.law)) {
    const auto [i, k] = matching_arm(inst, a);
    const double p = x[i] == 1.0 ? m->click_prob(i, k) : 0.0;
    if (p > 0.0) support.push_back({Outcome{{i}}, p});
    if (p < 1.0) support.push_back({Outcome{}, 1.0 - p});
    return support;
  }
  if (const auto* mnl = std::get_if<MnlLaw>(&inst.law)) {
    const auto& offered = inst.assortments().sets.at(a.index);
    const auto probs = mnl_choice_prob(x, offered, mnl->beta, mnl->v0);
    for (int j = 0; j < probs.purchase.size(); ++j)
      support.push_back({Outcome{{offered[j]}}, probs.purchase[j]});
    support.push_back({Outcome{}, probs.no_purchase});
    return support;
  }
  const auto& tab = std::get<TabularLaw>(inst.law);
  const int c = tab.context_id(x);
  if (c < 0) throw MalformedInstance("unknown context in tabular law");
  if (a.index < 0 || a.index >= static_cast<int>(tab.table[c].size()))
    throw MalformedInstance("unknown action in tabular law");
  return tab.table[c][a.index];
}

double apply_outcome(InventoryState& state, const Outcome& y, const Instance& inst) {
  double reward = 0.0;
  if (inst.mode == Mode::kSingleReward) {
    for (int i : y.consumed) {
      if (i < 0 || i >= inst.num_resources())
        throw StateCorruption("outcome references unknown resource");
      if (state.consumed[i] < inst.resources[i].inventory) {
        ++state.consumed[i];
        reward += inst.resources[i].reward;
      }
    }
  } else {
    const auto& combos = inst.assortments().combos;
    for (int c : y.consumed) {
      if (c < 0 || c >= static_cast<int>(combos.size()))
        throw StateCorruption("outcome references unknown combo");
      const auto& combo = combos[c];
      if (state.consumed[combo.resource] >= inst.resources[combo.resource].inventory)
        throw StateCorruption("multi-price consumption on a depleted resource");
      ++state.consumed[combo.resource];
      reward += combo.price;
    }
  }
  ++state.period;
  return reward;
}

}  // namespace iballoc
