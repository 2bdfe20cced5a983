#include <doctest.h>

#include <cmath>

#include "iballoc/instances.hpp"
#include "iballoc/learners.hpp"

using namespace iballoc;

TEST_CASE("rad closed form") {
  CHECK(rad(3.0, 0.0, 7.0) == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
  CHECK(rad(4.0, 1.0, 4.0) == 2.25);
  // 72 ln 2 case, reference value from extended-precision evaluation.
  CHECK(std::abs(rad(72.0 * std::log(2.0), 0.5, 10.0) - 6.6703210086721018) < 1e-12);
  CHECK_THROWS_AS(rad(1.0, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(rad(1.0, 0.5, -2.0), DomainError);
}

TEST_CASE("rad is nonincreasing in the play count for fixed mean") {
  const double alpha = 72.0 * std::log(2.0 * 2 * 2 * 100.0 * 100.0);
  for (double mu : {0.0, 0.2, 0.9}) {
    double prev = rad(alpha, mu, 1.0);
    for (int count = 2; count <= 400; ++count) {
      const double cur = rad(alpha, mu, static_cast<double>(count));
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

namespace {

OracleInput make_input(int t, const Context& x, const Eigen::VectorXd& vr) {
  OracleInput in;
  in.period = t;
  in.context = &x;
  in.virtual_rewards = &vr;
  return in;
}

Instance matching_2x2() {
  Eigen::MatrixXd p(2, 2);
  p << 0.6, 0.4, 0.5, 0.5;
  return gen_matching_instance(2, 2, Eigen::VectorXi::Constant(2, 100),
                               Eigen::VectorXd::Ones(2), p,
                               std::vector<Context>(10, Context::Ones(2)));
}

}  // namespace

TEST_CASE("ucb first-period pick is decided by the virtual reward") {
  UcbLearner ucb(2, 1);
  Context x = Context::Ones(2);
  Eigen::VectorXd vr(2);
  vr << 5.0, 1.0;
  Rng rng(1);
  CHECK(ucb.select(make_input(1, x, vr), rng).index == 0);
}

TEST_CASE("ucb tie-breaking and eligibility") {
  UcbLearner ucb(3, 2);
  Rng rng(1);
  SUBCASE("all-zero rewards pick the first eligible arm") {
    Context x = Context::Ones(3);
    Eigen::VectorXd vr = Eigen::VectorXd::Zero(3);
    CHECK(ucb.select(make_input(1, x, vr), rng).index == 0);
    x[0] = 0.0;  // first eligible arm now belongs to resource 1
    CHECK(ucb.select(make_input(1, x, vr), rng).index == 2);
  }
  SUBCASE("single eligible resource") {
    Context x = Context::Zero(3);
    x[1] = 1.0;
    Eigen::VectorXd vr = Eigen::VectorXd::Ones(3);
    const Action a = ucb.select(make_input(1, x, vr), rng);
    CHECK(a.index / 2 == 1);
  }
  SUBCASE("nothing eligible returns the none action") {
    Context x = Context::Zero(3);
    Eigen::VectorXd vr = Eigen::VectorXd::Ones(3);
    CHECK(ucb.select(make_input(1, x, vr), rng).is_none());
  }
}

TEST_CASE("ucb update counts eligible plays only") {
  UcbLearner ucb(2, 2);
  Context x = Context::Ones(2);
  SUBCASE("eligible click") {
    ucb.update(x, Action(1), Outcome{{0}});
    CHECK(ucb.eligible_count(0, 1) == 1);
    CHECK(ucb.success_sum(0, 1) == 1);
  }
  SUBCASE("eligible no-click") {
    ucb.update(x, Action(1), Outcome{});
    CHECK(ucb.eligible_count(0, 1) == 1);
    CHECK(ucb.success_sum(0, 1) == 0);
  }
  SUBCASE("ineligible context leaves the state unchanged") {
    Context x0 = Context::Zero(2);
    ucb.update(x0, Action(1), Outcome{{0}});
    CHECK(ucb.eligible_count(0, 1) == 0);
    CHECK(ucb.success_sum(0, 1) == 0);
  }
  // Estimator denominator is count + 1.
  ucb.update(x, Action(0), Outcome{{0}});
  CHECK(ucb.estimate(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ucb selection is invariant to positive reward rescaling") {
  const Instance inst = matching_2x2();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    UcbLearner a(2, 2), b(2, 2);
    Rng rng_a(seed), rng_b(seed), outcomes(seed + 100);
    Context x = Context::Ones(2);
    for (int t = 1; t <= 60; ++t) {
      Eigen::VectorXd vr(2);
      vr << 1.0 + 0.1 * (t % 5), 2.0 - 0.2 * (t % 3);
      Eigen::VectorXd scaled = 3.7 * vr;
      const Action ca = a.select(make_input(t, x, vr), rng_a);
      const Action cb = b.select(make_input(t, x, scaled), rng_b);
      REQUIRE(ca == cb);
      const Outcome y = sample_outcome(inst, x, ca, outcomes);
      a.update(x, ca, y);
      b.update(x, cb, y);
    }
  }
}

TEST_CASE("clairvoyant matches the exact argmax") {
  const Instance inst = matching_2x2();
  ClairvoyantLearner oracle(inst);
  Rng rng(1);
  Context x = Context::Ones(2);

  Eigen::VectorXd vr(2);
  vr << 1.0, 1.0;
  // R = (0.6, 0.4, 0.5, 0.5): arm (0,0) wins.
  CHECK(oracle.select(make_input(1, x, vr), rng).index == 0);

  vr << 0.5, 1.0;
  // R = (0.3, 0.2, 0.5, 0.5): arm (1,0) wins.
  CHECK(oracle.select(make_input(1, x, vr), rng).index == 2);

  vr << 0.0, 0.0;
  CHECK(oracle.select(make_input(1, x, vr), rng).index == 0);  // lexicographic tie

  Context only_second = Context::Zero(2);
  only_second[1] = 1.0;
  vr << 5.0, 0.1;
  CHECK(oracle.select(make_input(1, only_second, vr), rng).index == 2);
}

namespace {

Instance small_mnl_instance(int m, double v0, const Eigen::MatrixXd& beta) {
  Instance inst;
  inst.mode = Mode::kMultiPrice;
  std::vector<Combo> combos;
  for (int j = 0; j < m; ++j) {
    inst.resources.push_back({0.0, {10.0 + j}, 5});
    combos.push_back({j, 10.0 + j});
  }
  inst.family = all_subsets_family(std::move(combos));
  inst.law = MnlLaw{beta, v0};
  Context x(2);
  x << 1.0, 0.5;
  inst.horizon = 1;
  inst.arrivals = {x};
  inst.validate();
  return inst;
}

double assortment_value(const Instance& inst, const Context& x, int set_index,
                        const Eigen::MatrixXd& beta, double v0,
                        const Eigen::VectorXd& vr) {
  const auto& fam = inst.assortments();
  const auto probs = mnl_choice_prob(x, fam.sets[set_index], beta, v0);
  double value = 0.0;
  for (int j = 0; j < probs.purchase.size(); ++j)
    value += probs.purchase[j] * vr[fam.sets[set_index][j]];
  return value;
}

}  // namespace

TEST_CASE("point-mass thompson sampling equals brute-force assortment optimization") {
  Eigen::MatrixXd beta(4, 2);
  beta << 1.0, 0.3, 0.2, -0.5, -0.4, 1.1, 0.8, 0.0;
  const Instance inst = small_mnl_instance(4, 2.0, beta);
  const Context& x = inst.arrivals[0];

  TsMnlOptions opt;
  opt.prior_half_width = 0.0;  // point mass at the true parameters
  TsMnlLearner ts(inst, beta, opt);

  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd vr(4);
    for (int j = 0; j < 4; ++j) vr[j] = -2.0 + 1.7 * ((trial + j) % 5);
    const Action chosen = ts.select(make_input(1, x, vr), rng);

    int best = 0;
    double best_value = 0.0;  // the empty set at index 0
    for (int s = 1; s < action_count(inst); ++s) {
      const double v = assortment_value(inst, x, s, beta, 2.0, vr);
      if (v > best_value) {
        best_value = v;
        best = s;
      }
    }
    CHECK(chosen.index == best);
  }
}

TEST_CASE("thompson sampling degenerate cases") {
  Eigen::MatrixXd beta(1, 2);
  beta << 0.4, 0.2;
  const Instance inst = small_mnl_instance(1, 1.0, beta);
  const Context& x = inst.arrivals[0];
  TsMnlOptions opt;
  opt.prior_half_width = 0.5;
  TsMnlLearner ts(inst, beta, opt);
  Rng rng(3);

  Eigen::VectorXd vr(1);
  vr << 4.0;
  // Single product with positive reward: offering it beats the empty set.
  const auto& sets = inst.assortments().sets;
  const Action a = ts.select(make_input(1, x, vr), rng);
  CHECK(sets[a.index] == std::vector<int>{0});

  vr << -1.0;
  CHECK(ts.select(make_input(1, x, vr), rng).index == 0);  // empty set

  vr << 0.0;
  CHECK(ts.select(make_input(1, x, vr), rng).index == 0);  // nothing to gain
}

TEST_CASE("thompson sampling posterior updates stay well conditioned") {
  Eigen::MatrixXd truth(3, 2);
  truth << 0.8, 0.1, -0.2, 0.6, 0.3, -0.4;
  const Instance inst = small_mnl_instance(3, 1.5, truth);
  const Context& x = inst.arrivals[0];

  TsMnlOptions opt;
  opt.prior_half_width = 1.0;
  TsMnlLearner ts(inst, Eigen::MatrixXd::Zero(3, 2), opt);

  Rng rng(11);
  Eigen::VectorXd vr = Eigen::VectorXd::Ones(3);
  for (int t = 1; t <= 40; ++t) {
    const Action a = ts.select(make_input(t, x, vr), rng);
    const Outcome y = sample_outcome(inst, x, a, rng);
    ts.update(x, a, y);
  }
  CHECK_FALSE(ts.degraded());
  for (int j = 0; j < 3; ++j) {
    const Eigen::LLT<Eigen::MatrixXd> llt(ts.posterior_curvature(j));
    CHECK(llt.info() == Eigen::Success);
  }
  CHECK(ts.posterior_mode().allFinite());
  // The mode stays inside the prior box.
  CHECK((ts.posterior_mode().array().abs() < 1.0).all());
}

TEST_CASE("learners are deterministic given seeds") {
  Eigen::MatrixXd beta(3, 2);
  beta << 0.8, 0.1, -0.2, 0.6, 0.3, -0.4;
  const Instance inst = small_mnl_instance(3, 1.5, beta);
  const Context& x = inst.arrivals[0];
  Eigen::VectorXd vr = Eigen::VectorXd::Ones(3);

  std::vector<int> first, second;
  for (int run = 0; run < 2; ++run) {
    TsMnlOptions opt;
    opt.prior_half_width = 0.7;
    TsMnlLearner ts(inst, Eigen::MatrixXd::Zero(3, 2), opt);
    Rng rng(404);
    auto& seq = run == 0 ? first : second;
    for (int t = 1; t <= 15; ++t) {
      const Action a = ts.select(make_input(t, x, vr), rng);
      seq.push_back(a.index);
      ts.update(x, a, sample_outcome(inst, x, a, rng));
    }
  }
  CHECK(first == second);
}
