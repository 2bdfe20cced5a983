#pragma once

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "iballoc/common.hpp"

namespace iballoc {

using Context = Eigen::VectorXd;

// Whether a resource carries a single reward rate or a finite price set.
enum class Mode { kSingleReward, kMultiPrice };

struct Resource {
  double reward = 0.0;          // single-reward mode
  std::vector<double> prices;   // multi-price mode, strictly ascending
  int inventory = 0;

  double max_price() const { return prices.empty() ? reward : prices.back(); }
};

// A (resource, price) combination offered inside an assortment.
struct Combo {
  int resource = 0;
  double price = 0.0;
};

// Actions are indices into the instance's action family; kNone is the no-op
// played when nothing is eligible. Index order is the lexicographic order on
// action identifiers, which all tie-breaking contracts rely on.
struct Action {
  int index = kNoneIndex;
  static constexpr int kNoneIndex = -1;

  Action() = default;
  explicit Action(int idx) : index(idx) {}
  static Action none() { return Action(); }
  bool is_none() const { return index == kNoneIndex; }
  friend bool operator==(const Action& a, const Action& b) { return a.index == b.index; }
};

// Matching actions (i,k): index = i * arms_per_resource + k.
struct MatchingFamily {
  int arms_per_resource = 1;
};

// Finite downward-closed assortment family over combinations. `sets` holds
// sorted combo-index lists in lexicographic order; sets[0] must be empty.
struct AssortmentFamily {
  std::vector<Combo> combos;
  std::vector<std::vector<int>> sets;
};

using ActionFamily = std::variant<MatchingFamily, AssortmentFamily>;

// All subsets of `combos`, in lexicographic set order (the empty set first).
AssortmentFamily all_subsets_family(std::vector<Combo> combos);

struct MatchingLaw {
  Eigen::MatrixXd click_prob;  // n x K, entries in [0,1]
};

struct MnlLaw {
  Eigen::MatrixXd beta;  // one row per combo, columns = feature dimension
  double v0 = 1.0;       // no-purchase attraction weight
};

// Consumed-index list, sorted ascending. Indices refer to resources in
// single-reward mode and to combos in multi-price mode.
struct Outcome {
  std::vector<int> consumed;

  bool contains(int idx) const;
  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.consumed == b.consumed;
  }
};

// Explicit conditional distributions, keyed by (registered context, action).
struct TabularLaw {
  std::vector<Context> contexts;
  // table[c][a] lists (outcome, probability); each list sums to 1.
  std::vector<std::vector<std::vector<std::pair<Outcome, double>>>> table;

  int context_id(const Context& x) const;  // -1 if unknown
};

using OutcomeLaw = std::variant<MatchingLaw, MnlLaw, TabularLaw>;

struct Instance {
  Mode mode = Mode::kSingleReward;
  std::vector<Resource> resources;
  ActionFamily family;
  int horizon = 0;
  std::vector<Context> arrivals;
  OutcomeLaw law;

  int num_resources() const { return static_cast<int>(resources.size()); }
  double r_max() const;
  int b_min() const;

  const MatchingFamily& matching() const;
  const AssortmentFamily& assortments() const;

  // Throws MalformedInstance on any violated structural invariant.
  void validate() const;
};

int action_count(const Instance& inst);

// (i, k) of a matching action.
std::pair<int, int> matching_arm(const Instance& inst, Action a);

// Consumption counters N_i and the current period index.
struct InventoryState {
  Eigen::VectorXi consumed;
  int period = 0;

  static InventoryState initial(const Instance& inst) {
    InventoryState s;
    s.consumed = Eigen::VectorXi::Zero(inst.num_resources());
    return s;
  }
  bool depleted(const Instance& inst, int i) const {
    return consumed[i] >= inst.resources[i].inventory;
  }
};

// Numerically stable MNL purchase probabilities for the offered combo set.
// Returns one probability per element of `offered` plus the no-purchase
// remainder; the full vector sums to 1.
struct MnlChoiceProbs {
  Eigen::VectorXd purchase;  // aligned with `offered`
  double no_purchase = 1.0;
};
MnlChoiceProbs mnl_choice_prob(const Context& x, const std::vector<int>& offered,
                               const Eigen::MatrixXd& beta, double v0);

// One draw from rho_{x,a}. Deterministic given the rng state.
Outcome sample_outcome(const Instance& inst, const Context& x, Action a, Rng& rng);

// Exact per-index expected consumption sum_y rho_{x,a}(y) y, length
// num_resources (single-reward) or combos.size() (multi-price).
Eigen::VectorXd expected_consumption(const Instance& inst, const Context& x, Action a);

// Exact R^t(a) = sum_y rho_{x,a}(y) sum_i y_i r_i^t for the supplied virtual
// rewards (per resource or per combo depending on mode).
double expected_auxiliary_reward(const Instance& inst, const Context& x, Action a,
                                 const Eigen::VectorXd& virtual_rewards);

// Full outcome support, for brute-force oracles and law normalization checks.
std::vector<std::pair<Outcome, double>> outcome_support(const Instance& inst,
                                                        const Context& x, Action a);

// Consumes what the outcome allows (single-reward mode skips depleted
// resources at zero reward) and returns the reward earned.
double apply_outcome(InventoryState& state, const Outcome& y, const Instance& inst);

}  // namespace iballoc
