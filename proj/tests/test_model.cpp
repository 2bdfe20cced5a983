#include <doctest.h>

#include <cmath>

#include "iballoc/instances.hpp"
#include "iballoc/model.hpp"

using namespace iballoc;

namespace {

Instance matching_1x1(double p, double r = 1.0, int b = 1, int T = 1) {
  Eigen::MatrixXd probs(1, 1);
  probs << p;
  return gen_matching_instance(1, 1, Eigen::VectorXi::Constant(1, b),
                               Eigen::VectorXd::Constant(1, r), probs,
                               std::vector<Context>(T, Context::Ones(1)));
}

Instance tabular_two_outcome() {
  // One action; outcome e_0 w.p. 0.3, nothing otherwise.
  Instance inst;
  inst.mode = Mode::kSingleReward;
  inst.resources.push_back({10.0, {}, 1});
  inst.family = MatchingFamily{1};
  TabularLaw tab;
  Context c(1);
  c << 0.0;
  tab.contexts.push_back(c);
  tab.table = {{{{Outcome{{0}}, 0.3}, {Outcome{}, 0.7}}}};
  inst.law = std::move(tab);
  inst.horizon = 1;
  inst.arrivals = {c};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("sampling an incompatible context never consumes") {
  Eigen::MatrixXd p(1, 1);
  p << 0.9;
  Instance inst = gen_matching_instance(1, 1, Eigen::VectorXi::Constant(1, 1),
                                        Eigen::VectorXd::Constant(1, 1.0), p,
                                        {Context::Zero(1)});
  Rng rng(7);
  for (int i = 0; i < 200; ++i)
    CHECK(sample_outcome(inst, inst.arrivals[0], Action(0), rng).consumed.empty());
}

TEST_CASE("degenerate click probability always consumes") {
  const Instance inst = matching_1x1(1.0);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Outcome y = sample_outcome(inst, inst.arrivals[0], Action(0), rng);
    REQUIRE(y.consumed == std::vector<int>{0});
  }
}

TEST_CASE("sampling is deterministic given the rng state") {
  const Instance inst = matching_1x1(0.42);
  Rng a(123), b(123);
  for (int i = 0; i < 50; ++i)
    CHECK(sample_outcome(inst, inst.arrivals[0], Action(0), a) ==
          sample_outcome(inst, inst.arrivals[0], Action(0), b));
}

TEST_CASE("empty assortment never sells") {
  Instance inst;
  inst.mode = Mode::kMultiPrice;
  inst.resources.push_back({0.0, {5.0}, 2});
  inst.family = all_subsets_family({{0, 5.0}});
  Eigen::MatrixXd beta(1, 2);
  beta << 3.0, 1.0;
  inst.law = MnlLaw{beta, 0.5};
  Context x(2);
  x << 1.0, 0.5;
  inst.horizon = 1;
  inst.arrivals = {x};
  inst.validate();
  Rng rng(5);
  for (int i = 0; i < 100; ++i)
    CHECK(sample_outcome(inst, x, Action(0), rng).consumed.empty());  // set 0 is empty
}

TEST_CASE("apply_outcome handles depletion and additivity") {
  Instance inst;
  inst.mode = Mode::kSingleReward;
  inst.resources.push_back({3.0, {}, 2});
  inst.resources.push_back({5.0, {}, 1});
  inst.family = MatchingFamily{1};
  inst.law = MatchingLaw{Eigen::MatrixXd::Constant(2, 1, 0.5)};
  inst.horizon = 0;

  InventoryState state = InventoryState::initial(inst);

  SUBCASE("empty outcome earns nothing") {
    CHECK(apply_outcome(state, Outcome{}, inst) == 0.0);
    CHECK(state.consumed.sum() == 0);
  }
  SUBCASE("additivity over resources") {
    CHECK(apply_outcome(state, Outcome{{0, 1}}, inst) == 8.0);
    CHECK(state.consumed[0] == 1);
    CHECK(state.consumed[1] == 1);
  }
  SUBCASE("depleted resource earns nothing and stays capped") {
    state.consumed[1] = 1;
    CHECK(apply_outcome(state, Outcome{{1}}, inst) == 0.0);
    CHECK(state.consumed[1] == 1);
  }
}

TEST_CASE("expected auxiliary reward closed forms") {
  SUBCASE("matching") {
    const Instance inst = matching_1x1(0.37, 2.5);
    Eigen::VectorXd vr(1);
    vr << 2.5;
    CHECK(expected_auxiliary_reward(inst, inst.arrivals[0], Action(0), vr) ==
          doctest::Approx(0.925).epsilon(1e-14));
    vr << 0.0;
    CHECK(expected_auxiliary_reward(inst, inst.arrivals[0], Action(0), vr) == 0.0);
  }
  SUBCASE("tabular hand expansion") {
    const Instance inst = tabular_two_outcome();
    Eigen::VectorXd vr(1);
    vr << 10.0;
    CHECK(expected_auxiliary_reward(inst, inst.arrivals[0], Action(0), vr) ==
          doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch") {
    const Instance inst = tabular_two_outcome();
    CHECK_THROWS_AS(
        expected_auxiliary_reward(inst, inst.arrivals[0], Action(0), Eigen::VectorXd(3)),
        MalformedInstance);
  }
}

TEST_CASE("law normalization over random instances") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_small_instance(rng);
    for (const auto& x : inst.arrivals) {
      for (int a = 0; a < action_count(inst); ++a) {
        double total = 0.0;
        for (const auto& [y, p] : outcome_support(inst, x, Action(a))) total += p;
        CHECK(std::abs(total - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("monte carlo consistency of sampling vs exact expectation") {
  const Instance inst = matching_1x1(0.37, 2.5);
  const Context& x = inst.arrivals[0];
  Eigen::VectorXd vr(1);
  vr << 2.5;
  const double exact = expected_auxiliary_reward(inst, x, Action(0), vr);

  Rng rng(2024);
  const int draws = 100000;
  MeanSe stat;
  for (int i = 0; i < draws; ++i) {
    const Outcome y = sample_outcome(inst, x, Action(0), rng);
    stat.add(y.consumed.empty() ? 0.0 : 2.5);
  }
  CHECK(std::abs(stat.mean - exact) <= 4.0 * stat.se());
}

TEST_CASE("tabular law rejects unknown contexts") {
  const Instance inst = tabular_two_outcome();
  Context unknown(1);
  unknown << 42.0;
  Rng rng(1);
  CHECK_THROWS_AS(sample_outcome(inst, unknown, Action(0), rng), MalformedInstance);
  CHECK_THROWS_AS(expected_consumption(inst, unknown, Action(0)), MalformedInstance);
}

TEST_CASE("instance validation catches structural faults") {
  Instance inst = matching_1x1(0.5);
  SUBCASE("bad horizon") {
    inst.horizon = 3;
    CHECK_THROWS_AS(inst.validate(), MalformedInstance);
  }
  SUBCASE("bad inventory") {
    inst.resources[0].inventory = 0;
    CHECK_THROWS_AS(inst.validate(), MalformedInstance);
  }
  SUBCASE("nonbinary matching context") {
    inst.arrivals[0][0] = 0.5;
    CHECK_THROWS_AS(inst.validate(), MalformedInstance);
  }
  SUBCASE("click probability out of range") {
    std::get<MatchingLaw>(inst.law).click_prob(0, 0) = 1.2;
    CHECK_THROWS_AS(inst.validate(), MalformedInstance);
  }
}
