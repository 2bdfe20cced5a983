#include <doctest.h>

#include <cmath>
#include <sstream>

#include "iballoc/benchmark.hpp"
#include "iballoc/instances.hpp"
#include "iballoc/learners.hpp"

using namespace iballoc;

namespace {

Instance single_action_instance(double p, double r, int b, int T) {
  Eigen::MatrixXd probs(1, 1);
  probs << p;
  return gen_matching_instance(1, 1, Eigen::VectorXi::Constant(1, b),
                               Eigen::VectorXd::Constant(1, r), probs,
                               std::vector<Context>(T, Context::Ones(1)));
}

Instance random_matching(Rng& rng, int n, int K, int b, int T) {
  Eigen::MatrixXd p(n, K);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) p(i, k) = rng.next_double();
  Eigen::VectorXd rewards(n);
  for (int i = 0; i < n; ++i) rewards[i] = rng.uniform(1.0, 10.0);
  std::vector<Context> arrivals;
  for (int t = 0; t < T; ++t) {
    Context x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.bernoulli(0.7) ? 1.0 : 0.0;
    arrivals.push_back(std::move(x));
  }
  return gen_matching_instance(n, K, Eigen::VectorXi::Constant(n, b), rewards, p,
                               std::move(arrivals));
}

}  // namespace

TEST_CASE("primal LP optimum on pinned examples") {
  CHECK(solve_lp(build_primal_lp(single_action_instance(1.0, 7.0, 1, 1))).value ==
        doctest::Approx(7.0).epsilon(1e-10));
  CHECK(solve_lp(build_primal_lp(single_action_instance(0.3, 7.0, 1, 1))).value ==
        doctest::Approx(2.1).epsilon(1e-10));
  CHECK(solve_lp(build_primal_lp(single_action_instance(0.5, 3.0, 2, 0))).value == 0.0);
}

TEST_CASE("simplex self-consistency: primal equals dual value") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = random_small_instance(rng, 4, 20, 4);
    const LpSolution sol = solve_lp(build_primal_lp(inst));
    CHECK(std::abs(sol.value - sol.dual_value) <= 1e-8 * (1.0 + std::abs(sol.value)));
    CHECK(sol.value >= -1e-9);
  }
}

TEST_CASE("LP duals form a feasible certificate matching OPT") {
  Rng rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_matching(rng, 1 + trial % 3, 1 + trial % 2, 3, 12);
    const LpSolution sol = solve_lp(build_primal_lp(inst));
    const DualCertificate cert = lp_dual_certificate(inst, sol);
    const FeasibilityReport feas = check_dual_feasibility(cert, inst, 1e-7);
    CHECK(feas.feasible);
    CHECK(dual_objective(cert, inst) == doctest::Approx(sol.value).epsilon(1e-8));
  }
}

TEST_CASE("trace certificates: pinned cases") {
  SUBCASE("nothing consumed") {
    const Instance inst = single_action_instance(1.0, 3.0, 2, 1);
    SimulationTrace trace;
    PeriodRecord rec;
    rec.t = 1;
    rec.virtual_rewards = Eigen::VectorXd::Constant(1, 3.0);
    rec.action = Action::none();
    rec.inventory_after = Eigen::VectorXi::Zero(1);
    trace.periods.push_back(rec);
    const DualCertificate cert =
        dual_from_trace(trace, inst, SinglePriceSchedule{});
    CHECK(cert.lambda[0] == 0.0);
    CHECK(cert.gamma[0] == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("single period full consumption") {
    const int b = 3;
    const Instance inst = single_action_instance(1.0, 5.0, b, 1);
    ClairvoyantLearner oracle(inst);
    Rng sim(4);
    const SimulationTrace trace =
        run_integrated(inst, oracle, default_schedule(inst), sim);
    const DualCertificate cert =
        dual_from_trace(trace, inst, SinglePriceSchedule{});
    CHECK(cert.gamma[0] == doctest::Approx(5.0).epsilon(1e-12));  // Gamma_1 = r_1
    CHECK(cert.lambda[0] ==
          doctest::Approx(5.0 * psi(1.0 / b)).epsilon(1e-12));
  }
  SUBCASE("fully consumed resource pins lambda at the reward") {
    const Instance inst = single_action_instance(1.0, 5.0, 1, 2);
    ClairvoyantLearner oracle(inst);
    Rng sim(4);
    const SimulationTrace trace =
        run_integrated(inst, oracle, default_schedule(inst), sim);
    const DualCertificate cert =
        dual_from_trace(trace, inst, SinglePriceSchedule{});
    CHECK(cert.lambda[0] == doctest::Approx(5.0).epsilon(1e-14));
  }
}

TEST_CASE("trace certificates are always feasible and dominate OPT") {
  Rng rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_small_instance(rng, 4, 30, 5);
    Rng sim(trial + 1);
    std::unique_ptr<Learner> learner;
    if (std::holds_alternative<MatchingLaw>(inst.law)) {
      learner = std::make_unique<UcbLearner>(inst.num_resources(),
                                             inst.matching().arms_per_resource);
    } else {
      learner = std::make_unique<ClairvoyantLearner>(inst);
    }
    const PenaltySchedule schedule = default_schedule(inst);
    const SimulationTrace trace = run_integrated(inst, *learner, schedule, sim);
    const DualCertificate cert = dual_from_trace(trace, inst, schedule);

    const FeasibilityReport feas = check_dual_feasibility(cert, inst, 1e-9);
    CHECK(feas.feasible);
    CHECK(feas.worst_violation <= 1e-9);

    const double opt = solve_lp(build_primal_lp(inst)).value;
    CHECK(dual_objective(cert, inst) >= opt - 1e-8);
  }
}

TEST_CASE("hand-built certificates") {
  const Instance inst = single_action_instance(0.5, 4.0, 2, 3);
  const int n = 1, T = 3;
  DualCertificate cert;
  SUBCASE("lambda = r, gamma = 0 is feasible") {
    cert.lambda = Eigen::VectorXd::Constant(n, 4.0);
    cert.gamma = Eigen::VectorXd::Zero(T);
    CHECK(check_dual_feasibility(cert, inst).feasible);
  }
  SUBCASE("all-zero certificate is infeasible with a located violation") {
    cert.lambda = Eigen::VectorXd::Zero(n);
    cert.gamma = Eigen::VectorXd::Zero(T);
    const FeasibilityReport feas = check_dual_feasibility(cert, inst);
    CHECK_FALSE(feas.feasible);
    CHECK(feas.worst_violation == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(feas.worst_action == 0);
    CHECK(feas.worst_period >= 1);
  }
  SUBCASE("dimension mismatch") {
    cert.lambda = Eigen::VectorXd::Zero(2);
    cert.gamma = Eigen::VectorXd::Zero(T);
    CHECK_THROWS_AS(check_dual_feasibility(cert, inst), MalformedInstance);
  }
}

TEST_CASE("dynamic-programming oracle") {
  SUBCASE("deterministic consumption with ample inventory") {
    // r = 2, p = 1, b >= T: every period earns 2.
    CHECK(brute_force_opt(single_action_instance(1.0, 2.0, 5, 4)) ==
          doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("two-period reservation hand computation") {
    // One unit, arrivals with click probs (0.5, 1.0): accepting the first
    // still yields 0.5 + 0.5 * 1 = 1, matching the reserve policy.
    Instance inst;
    inst.mode = Mode::kSingleReward;
    inst.resources.push_back({1.0, {}, 1});
    inst.family = MatchingFamily{1};
    TabularLaw tab;
    Context c0(1), c1(1);
    c0 << 0.0;
    c1 << 1.0;
    tab.contexts = {c0, c1};
    tab.table = {{{{Outcome{{0}}, 0.5}, {Outcome{}, 0.5}}},
                 {{{Outcome{{0}}, 1.0}}}};
    inst.law = std::move(tab);
    inst.horizon = 2;
    inst.arrivals = {c0, c1};
    inst.validate();
    CHECK(brute_force_opt(inst) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("state-space guard") {
    CHECK_THROWS_AS(brute_force_opt(single_action_instance(0.5, 1.0, 1000000, 50), 1e5),
                    SizeError);
  }
}

TEST_CASE("the LP upper-bounds the DP on random tiny instances") {
  Rng rng(314);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_small_instance(rng, 3, 12, 3);
    const double lp = solve_lp(build_primal_lp(inst)).value;
    const double dp = brute_force_opt(inst);
    CHECK(lp >= dp - 1e-8);
  }
}

TEST_CASE("multi-price LP and DP agree on a near-deterministic seller") {
  Instance inst;
  inst.mode = Mode::kMultiPrice;
  inst.resources.push_back({0.0, {4.0}, 1});
  inst.resources.push_back({0.0, {3.0}, 2});
  inst.family = all_subsets_family({{0, 4.0}, {1, 3.0}});
  Eigen::MatrixXd beta(2, 1);
  beta << 2.0, 1.5;
  inst.law = MnlLaw{beta, 1.0};
  inst.horizon = 5;
  inst.arrivals.assign(5, Context::Ones(1));
  inst.validate();

  const double lp = solve_lp(build_primal_lp(inst)).value;
  const double dp = brute_force_opt(inst);
  CHECK(lp >= dp - 1e-8);
  CHECK(lp <= 4.0 + 2 * 3.0 + 1e-9);  // conservation bound
}

TEST_CASE("guarantee gap report") {
  const Instance inst = single_action_instance(0.6, 2.0, 3, 10);
  const PenaltySchedule schedule = default_schedule(inst);
  std::vector<SimulationTrace> traces;
  for (int rep = 0; rep < 50; ++rep) {
    ClairvoyantLearner oracle(inst);
    Rng sim(1000 + rep);
    traces.push_back(run_integrated(inst, oracle, schedule, sim));
  }
  const GuaranteeReport report = guarantee_gap_report(traces, inst, schedule);
  CHECK(report.replicates == 50);
  CHECK(report.mean_reg == 0.0);
  CHECK(report.factor ==
        doctest::Approx(competitive_factor<double>(3)).epsilon(1e-14));
  // Theorem bound with zero regret: OPT <= factor * E[ALG].
  CHECK(report.slack <= 3.0 * report.factor * report.se_alg + 1e-9);

  traces.resize(10);
  CHECK_THROWS_AS(guarantee_gap_report(traces, inst, schedule),
                  StatisticalPowerError);
}

TEST_CASE("LP text export is stable and well formed") {
  const Instance inst = single_action_instance(0.3, 7.0, 1, 1);
  const LpProblem lp = build_primal_lp(inst);
  std::ostringstream a, b;
  write_lp_format(lp, a);
  write_lp_format(lp, b);
  CHECK(a.str() == b.str());
  const std::string text = a.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("7.000000000000 z_0") != std::string::npos);
  CHECK(text.find("couple_0") != std::string::npos);
  CHECK(text.find("period_1") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
