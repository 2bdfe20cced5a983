#include <doctest.h>

#include <cmath>

#include "iballoc/instances.hpp"
#include "iballoc/penalty.hpp"

using namespace iballoc;

namespace {

// Reference values computed with 40-digit arithmetic (mpmath), frozen here.
// psi(k/20) for k = 0..20.
constexpr double kPsiGrid[21] = {
    0.0,
    0.029838583826498327,
    0.061207024560089122,
    0.094183759641697448,
    0.12885124808584153,
    0.16529617667112002,
    0.20360967670231164,
    0.24388755188610528,
    0.28623051789026868,
    0.33074445418527824,
    0.37754066879814544,
    0.42673617664046205,
    0.47845399210662952,
    0.53282343667392030,
    0.58998046227353153,
    0.65006799124122731,
    0.71323627369762296,
    0.77964326325174837,
    0.84945501196734497,
    0.92284608557951769,
    1.0,
};

// competitive_factor(b) for the b values below.
constexpr int kFactorB[20] = {1, 2,  3,  4,  5,  6,  7,   8,   9,   10,
                              12, 15, 20, 30, 50, 75, 100, 200, 500, 1000};
constexpr double kFactorGrid[20] = {
    2.0,
    1.8673779936055637,
    1.7937634551961629,
    1.7496600437938634,
    1.7205823578142623,
    1.7000363471126394,
    1.6847684941178880,
    1.6729844678655068,
    1.6636175127813185,
    1.6559948683592054,
    1.6443423573266625,
    1.6324231589720888,
    1.6202322028301285,
    1.6077643273321472,
    1.5975871172849697,
    1.5924299385524896,
    1.5898340550676369,
    1.5859184901827383,
    1.5835565758550533,
    1.5827671680948865,
};

constexpr double kLimitFactor = 1.5819767068693264;  // e / (e - 1)

}  // namespace

TEST_CASE("psi endpoints and reference grid") {
  CHECK(psi(0.0) == 0.0);
  CHECK(psi(1.0) == 1.0);
  for (int k = 0; k <= 20; ++k)
    CHECK(std::abs(psi(k / 20.0) - kPsiGrid[k]) < 1e-12);
  CHECK_THROWS_AS(psi(-0.01), DomainError);
  CHECK_THROWS_AS(psi(1.01), DomainError);
  CHECK_THROWS_AS(psi(std::nan("")), DomainError);
}

TEST_CASE("psi is convex and increasing on a grid") {
  for (int i = 0; i <= 100; ++i) {
    for (int j = i + 1; j <= 100; ++j) {
      const double u = i / 100.0, v = j / 100.0;
      CHECK(psi((u + v) / 2.0) <= (psi(u) + psi(v)) / 2.0 + 1e-15);
    }
    if (i > 0) CHECK(psi(i / 100.0) > psi((i - 1) / 100.0));
  }
}

TEST_CASE("discounted reward examples") {
  CHECK(discounted_reward(10.0, 0, 5) == 10.0);
  CHECK(discounted_reward(10.0, 5, 5) == 0.0);
  CHECK(std::abs(discounted_reward(10.0, 2, 5) - 7.1376948210973132) < 1e-12);
  CHECK_THROWS_AS(discounted_reward(10.0, 6, 5), StateCorruption);
  CHECK_THROWS_AS(discounted_reward(10.0, -1, 5), StateCorruption);
}

TEST_CASE("discounted reward is nonincreasing in consumption") {
  for (int b : {1, 3, 7, 20}) {
    double prev = discounted_reward(4.5, 0, b);
    for (int used = 1; used <= b; ++used) {
      const double cur = discounted_reward(4.5, used, b);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("competitive factor reference grid") {
  for (int i = 0; i < 20; ++i)
    CHECK(std::abs(competitive_factor<double>(kFactorB[i]) - kFactorGrid[i]) < 1e-12);
  CHECK(competitive_factor<double>(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(competitive_factor<double>(0), DomainError);
}

TEST_CASE("competitive factor is nonincreasing and bounded below by e/(e-1)") {
  double prev = competitive_factor<double>(1);
  for (int b = 2; b <= 500; ++b) {
    const double cur = competitive_factor<double>(b);
    CHECK(cur <= prev + 1e-15);
    CHECK(cur >= kLimitFactor - 1e-12);
    prev = cur;
  }
  CHECK(std::abs(competitive_factor<double>(100000000) - kLimitFactor) < 1e-7);
}

TEST_CASE("multi-price factor generalizes the single-price one") {
  for (int b : {1, 5, 50})
    CHECK(competitive_factor<double>(b, 1.0) ==
          doctest::Approx(competitive_factor<double>(b)).epsilon(1e-15));
  // Smaller alpha weakens the denominator, so the factor grows.
  CHECK(competitive_factor<double>(10, 0.8675005677047231) >
        competitive_factor<double>(10));
  CHECK_THROWS_AS(competitive_factor<double>(10, 0.0), DomainError);
}

namespace {

Instance two_price_instance(int inventory) {
  Instance inst;
  inst.mode = Mode::kMultiPrice;
  inst.resources.push_back({0.0, {307.0, 361.0}, inventory});
  inst.family = all_subsets_family({{0, 307.0}, {0, 361.0}});
  inst.horizon = 0;
  inst.law = MnlLaw{Eigen::MatrixXd::Zero(2, 1), 1.0};
  return inst;
}

}  // namespace

TEST_CASE("multi-price virtual rewards") {
  const Instance inst = two_price_instance(2);

  SUBCASE("table lookup") {
    MultiPriceSchedule sched;
    sched.phi.push_back(PhiCurve::table({{0.0, 0.0}, {0.5, 200.0}, {1.0, 361.0}}));
    sched.alpha1.push_back(1.0);
    const PenaltySchedule schedule = sched;
    CHECK(virtual_reward_multiprice(307.0, schedule, inst, 0, 1) ==
          doctest::Approx(107.0).epsilon(1e-14));
    CHECK(virtual_reward_multiprice(307.0, schedule, inst, 0, 0) == 307.0);
    CHECK(virtual_reward_multiprice(361.0, schedule, inst, 0, 2) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(virtual_reward_multiprice(100.0, schedule, inst, 0, 0),
                    MalformedInstance);
  }

  SUBCASE("default scaled-psi endpoints") {
    const PenaltySchedule schedule = default_schedule(inst);
    CHECK(virtual_reward_multiprice(361.0, schedule, inst, 0, 2) == 0.0);
    CHECK(virtual_reward_multiprice(307.0, schedule, inst, 0, 0) == 307.0);
    // Low price at full depletion goes negative.
    CHECK(virtual_reward_multiprice(307.0, schedule, inst, 0, 2) < 0.0);
  }
}

TEST_CASE("phi table validation and interpolation") {
  CHECK_THROWS_AS(PhiCurve::table({{0.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(PhiCurve::table({{0.0, 0.1}, {1.0, 5.0}}), ConfigError);
  CHECK_THROWS_AS(PhiCurve::table({{0.0, 0.0}, {0.9, 5.0}}), ConfigError);
  CHECK_THROWS_AS(PhiCurve::table({{0.0, 0.0}, {0.5, 3.0}, {1.0, 2.0}}), ConfigError);
  const PhiCurve curve = PhiCurve::table({{0.0, 0.0}, {0.25, 1.0}, {1.0, 4.0}});
  CHECK(curve(0.0) == 0.0);
  CHECK(curve(1.0) == 4.0);
  CHECK(curve(0.125) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(curve(0.25) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(curve(0.625) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK_THROWS_AS(curve(1.5), DomainError);
}

TEST_CASE("singleton price set with phi = r psi matches the discounted reward") {
  Instance inst;
  inst.mode = Mode::kMultiPrice;
  const double r = 6.25;
  inst.resources.push_back({0.0, {r}, 8});
  inst.family = all_subsets_family({{0, r}});
  inst.horizon = 0;
  inst.law = MnlLaw{Eigen::MatrixXd::Zero(1, 1), 1.0};
  const PenaltySchedule schedule = default_schedule(inst);  // phi = r * psi
  for (int used = 0; used <= 8; ++used) {
    CHECK(std::abs(virtual_reward_multiprice(r, schedule, inst, 0, used) -
                   discounted_reward(r, used, 8)) < 1e-12);
  }
}

TEST_CASE("schedule validation") {
  const Instance inst = two_price_instance(2);
  CHECK_THROWS_AS(validate_schedule(SinglePriceSchedule{}, inst), ConfigError);
  MultiPriceSchedule bad;
  bad.phi.push_back(PhiCurve::scaled_psi(10.0));  // Phi(1) != max price
  bad.alpha1.push_back(1.0);
  CHECK_THROWS_AS(validate_schedule(PenaltySchedule{bad}, inst), ConfigError);
  CHECK_NOTHROW(validate_schedule(default_schedule(inst), inst));
}
