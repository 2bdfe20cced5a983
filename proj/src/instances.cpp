#include "iballoc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iballoc {

Instance gen_matching_instance(int n, int K, const Eigen::VectorXi& inventories,
                               const Eigen::VectorXd& rewards,
                               const Eigen::MatrixXd& click_prob,
                               std::vector<Context> arrivals) {
  if (inventories.size() != n || rewards.size() != n)
    throw MalformedInstance("gen_matching_instance: per-resource vectors must have length n");
  if (click_prob.rows() != n || click_prob.cols() != K)
    throw MalformedInstance("gen_matching_instance: click table must be n x K");

  Instance inst;
  inst.mode = Mode::kSingleReward;
  for (int i = 0; i < n; ++i)
    inst.resources.push_back({rewards[i], {}, inventories[i]});
  inst.family = MatchingFamily{K};
  inst.horizon = static_cast<int>(arrivals.size());
  inst.arrivals = std::move(arrivals);
  inst.law = MatchingLaw{click_prob};
  inst.validate();
  return inst;
}

double LowerBoundParams::effective_epsilon() const {
  if (epsilon) return *epsilon;
  return std::sqrt(static_cast<double>(K) / (static_cast<double>(b) * n)) / 34.0;
}

void LowerBoundParams::validate() const {
  if (!(b >= K && K >= 3))
    throw MalformedInstance("lower-bound instance requires b >= K >= 3");
  const double eps = effective_epsilon();
  if (!(eps > 0.0 && eps <= 0.5))
    throw MalformedInstance("lower-bound epsilon must lie in (0, 1/2]");
}

LowerBoundDraw gen_lower_bound_instance(const LowerBoundParams& params, Rng& rng) {
  params.validate();
  const int n = params.n, b = params.b, K = params.K;
  const double eps = params.effective_epsilon();

  LowerBoundSecrets secrets;
  secrets.epsilon = eps;
  std::vector<int> scores(n);
  std::iota(scores.begin(), scores.end(), 1);
  rng.shuffle(scores);
  secrets.score = scores;
  secrets.secret_arm.resize(n);
  for (int i = 0; i < n; ++i)
    secrets.secret_arm[i] = static_cast<int>(rng.uniform_int(K));

  Eigen::MatrixXd p(n, K);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k)
      p(i, k) = (1.0 - eps) / 2.0 + (k == secrets.secret_arm[i] ? eps : 0.0);

  // Group j of 2b identical contexts, compatible with resources of score >= j.
  std::vector<Context> arrivals;
  arrivals.reserve(2 * b * n);
  for (int j = 1; j <= n; ++j) {
    Context x(n);
    for (int i = 0; i < n; ++i) x[i] = scores[i] >= j ? 1.0 : 0.0;
    for (int rep = 0; rep < 2 * b; ++rep) arrivals.push_back(x);
  }

  LowerBoundDraw draw;
  draw.instance = gen_matching_instance(n, K, Eigen::VectorXi::Constant(n, b),
                                        Eigen::VectorXd::Ones(n), p,
                                        std::move(arrivals));
  draw.secrets = std::move(secrets);
  return draw;
}

void HotelParams::validate() const {
  const int n = static_cast<int>(price_table.rows());
  if (n < 1 || price_table.cols() != 2)
    throw MalformedInstance("hotel price table must be n x 2");
  if ((price_table.array() <= 0.0).any())
    throw MalformedInstance("hotel prices must be positive");
  for (int i = 0; i < n; ++i)
    if (!(price_table(i, 1) > price_table(i, 0)))
      throw MalformedInstance("hotel high price must exceed the low price");
  if (base_inventory.size() != n || (base_inventory.array() < 1).any())
    throw MalformedInstance("hotel base inventory must be positive per category");
  if (!(inventory_scale > 0.0))
    throw MalformedInstance("hotel inventory scale must be positive");
  if (beta_center.rows() != 2 * n)
    throw MalformedInstance("hotel prior must have one row per product");
  if (prior_half_width < 0.0)
    throw MalformedInstance("hotel prior half-width must be >= 0");
  if (!(v0 > 0.0)) throw MalformedInstance("hotel v0 must be positive");
  if (arrival_pool.empty()) throw MalformedInstance("hotel arrival pool is empty");
  for (const auto& path : arrival_pool) {
    if (path.empty()) throw MalformedInstance("hotel arrival path is empty");
    for (const auto& x : path)
      if (x.size() != beta_center.cols() || x[0] != 1.0)
        throw MalformedInstance("hotel contexts must match the prior dimension "
                                "and start with the constant feature");
  }
}

Instance gen_hotel_instance(const HotelParams& params, Rng& rng) {
  params.validate();
  const int n = static_cast<int>(params.price_table.rows());
  const int m = 2 * n;
  const int d = static_cast<int>(params.beta_center.cols());

  // beta* ~ uniform over the box; then the arrival path, so the two draws
  // consume a fixed number of rng values each.
  Eigen::MatrixXd beta(m, d);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < d; ++k)
      beta(j, k) = params.beta_center(j, k) +
                   params.prior_half_width * (2.0 * rng.next_double() - 1.0);
  const auto& path =
      params.arrival_pool[rng.uniform_int(params.arrival_pool.size())];

  Instance inst;
  inst.mode = Mode::kMultiPrice;
  std::vector<Combo> combos;
  for (int i = 0; i < n; ++i) {
    const double low = params.price_table(i, 0);
    const double high =
        params.price_table(i, 1) * (params.double_high_price ? 2.0 : 1.0);
    const int scaled = std::max(
        1, static_cast<int>(std::ceil(params.base_inventory[i] * params.inventory_scale)));
    inst.resources.push_back({0.0, {low, high}, scaled});
    combos.push_back({i, low});
    combos.push_back({i, high});
  }
  inst.family = all_subsets_family(std::move(combos));
  inst.horizon = static_cast<int>(path.size());
  inst.arrivals = path;
  inst.law = MnlLaw{beta, params.v0};
  inst.validate();
  return inst;
}

std::vector<std::vector<Context>> make_hotel_pool(int paths, int approx_length,
                                                  Rng& rng) {
  if (paths < 1 || approx_length < 2)
    throw ConfigError("make_hotel_pool: need at least one path of length >= 2");
  std::vector<std::vector<Context>> pool(paths);
  for (auto& path : pool) {
    const int len = approx_length +
                    static_cast<int>(rng.uniform_int(approx_length / 5 + 1)) -
                    approx_length / 10;
    for (int t = 0; t < len; ++t) {
      Context x(9);
      x[0] = 1.0;
      x[1] = static_cast<double>(1 + rng.uniform_int(4)) / 4.0;  // party size
      x[2] = rng.bernoulli(0.15) ? 1.0 : 0.0;                    // vip
      x[3] = rng.bernoulli(2.0 / 7.0) ? 1.0 : 0.0;               // weekend
      x[4] = rng.next_double();                                  // advance booking
      x[5] = rng.bernoulli(0.35) ? 1.0 : 0.0;                    // business
      x[6] = static_cast<double>(1 + rng.uniform_int(7)) / 7.0;  // stay nights
      x[7] = rng.bernoulli(0.25) ? 1.0 : 0.0;                    // children
      x[8] = rng.next_double();                                  // loyalty
      path.push_back(std::move(x));
    }
  }
  return pool;
}

Instance random_small_instance(Rng& rng, int max_n, int max_T, int max_b) {
  const int n = 1 + static_cast<int>(rng.uniform_int(max_n));
  const int T = 1 + static_cast<int>(rng.uniform_int(max_T));
  Eigen::VectorXi b(n);
  Eigen::VectorXd rewards(n);
  for (int i = 0; i < n; ++i) {
    b[i] = 1 + static_cast<int>(rng.uniform_int(max_b));
    rewards[i] = rng.uniform(0.5, 10.0);
  }

  Instance inst;
  inst.mode = Mode::kSingleReward;
  for (int i = 0; i < n; ++i) inst.resources.push_back({rewards[i], {}, b[i]});
  inst.horizon = T;

  if (rng.bernoulli(0.5)) {
    const int K = 1 + static_cast<int>(rng.uniform_int(3));
    Eigen::MatrixXd p(n, K);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < K; ++k) p(i, k) = rng.next_double();
    inst.family = MatchingFamily{K};
    inst.law = MatchingLaw{p};
    for (int t = 0; t < T; ++t) {
      Context x(n);
      for (int i = 0; i < n; ++i) x[i] = rng.bernoulli(0.7) ? 1.0 : 0.0;
      inst.arrivals.push_back(std::move(x));
    }
    inst.validate();
    return inst;
  }

  // Tabular law with dense outcomes; the matching family supplies the
  // abstract action indexing.
  const int K = 1 + static_cast<int>(rng.uniform_int(2));
  inst.family = MatchingFamily{K};
  const int actions = n * K;
  const int num_contexts = 1 + static_cast<int>(rng.uniform_int(3));

  TabularLaw tab;
  for (int c = 0; c < num_contexts; ++c) {
    Context x(1);
    x[0] = c;
    tab.contexts.push_back(std::move(x));
  }
  tab.table.resize(num_contexts);
  for (int c = 0; c < num_contexts; ++c) {
    tab.table[c].resize(actions);
    for (int a = 0; a < actions; ++a) {
      const int support = 1 + static_cast<int>(rng.uniform_int(4));
      std::vector<int> masks(1 << n);
      std::iota(masks.begin(), masks.end(), 0);
      rng.shuffle(masks);
      std::vector<double> weights(support);
      double total = 0.0;
      for (auto& w : weights) {
        w = rng.uniform(0.05, 1.0);
        total += w;
      }
      auto& dist = tab.table[c][a];
      double acc = 0.0;
      for (int s = 0; s < support; ++s) {
        Outcome y;
        for (int i = 0; i < n; ++i)
          if (masks[s] & (1 << i)) y.consumed.push_back(i);
        // Make the final probability exact so the distribution sums to 1.
        const double p =
            s + 1 == support ? 1.0 - acc : weights[s] / total;
        acc += p;
        dist.push_back({std::move(y), p});
      }
    }
  }
  inst.law = std::move(tab);
  for (int t = 0; t < T; ++t) {
    Context x(1);
    x[0] = static_cast<double>(rng.uniform_int(num_contexts));
    inst.arrivals.push_back(std::move(x));
  }
  inst.validate();
  return inst;
}

HotelParams default_hotel_params() {
  HotelParams params;
  params.price_table.resize(4, 2);
  params.price_table << 307, 361,   // King
      304, 361,                     // Queen
      384, 496,                     // Suites
      306, 342;                     // Two-double
  params.double_high_price = true;
  params.base_inventory.resize(4);
  params.base_inventory << 48, 40, 12, 36;
  params.inventory_scale = 1.0;
  params.prior_half_width = 1.0;
  params.v0 = 40.0;

  // Synthetic prior centers: low-price variants carry most of the base
  // attraction; suites lean on vip/business features, two-doubles on party
  // size and children. Columns follow the make_hotel_pool encoding.
  const int d = 9;
  params.beta_center.resize(8, d);
  params.beta_center.setZero();
  auto row = [&](int j, std::initializer_list<double> vals) {
    int k = 0;
    for (double v : vals) params.beta_center(j, k++) = v;
  };
  //           const  party   vip   wknd  adv   bus   stay  child loyal
  row(0, {0.9, 0.3, 0.2, 0.1, -0.3, 0.3, 0.1, -0.2, 0.3});   // King low
  row(1, {0.1, 0.2, 0.7, 0.1, -0.5, 0.6, 0.1, -0.3, 0.4});   // King high
  row(2, {1.0, 0.2, -0.1, 0.2, -0.2, 0.1, 0.1, 0.1, 0.2});   // Queen low
  row(3, {0.2, 0.1, 0.4, 0.2, -0.4, 0.3, 0.1, 0.0, 0.3});    // Queen high
  row(4, {0.0, 0.3, 1.0, 0.2, -0.3, 0.8, 0.2, 0.2, 0.4});    // Suite low
  row(5, {-0.7, 0.2, 1.3, 0.2, -0.5, 0.9, 0.2, 0.1, 0.5});   // Suite high
  row(6, {0.9, 0.6, -0.3, 0.3, -0.2, -0.3, 0.1, 0.8, 0.2});  // Two-double low
  row(7, {0.1, 0.5, -0.2, 0.3, -0.4, -0.2, 0.1, 0.6, 0.3});  // Two-double high

  Rng pool_rng(0x486f74656c506f6fULL);  // fixed: the shipped pool is part of the config
  params.arrival_pool = make_hotel_pool(31, 200, pool_rng);
  return params;
}

}  // namespace iballoc
