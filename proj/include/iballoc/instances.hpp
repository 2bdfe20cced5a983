#pragma once

#include <optional>
#include <vector>

#include "iballoc/model.hpp"

namespace iballoc {

// Matching instance of the online-advertising form: n advertisers with K
// creatives each, click probability p_(i,k) when the context is compatible.
Instance gen_matching_instance(int n, int K, const Eigen::VectorXi& inventories,
                               const Eigen::VectorXd& rewards,
                               const Eigen::MatrixXd& click_prob,
                               std::vector<Context> arrivals);

struct LowerBoundParams {
  int n = 3;
  int b = 3;
  int K = 3;
  std::optional<double> epsilon;  // default (1/34) sqrt(K / (b n))

  double effective_epsilon() const;
  void validate() const;  // b >= K >= 3, epsilon in (0, 1/2]
};

// Kept out of the Instance so nothing learner-facing can observe them.
struct LowerBoundSecrets {
  std::vector<int> score;        // pi: score[i] in 1..n
  std::vector<int> secret_arm;   // l_i in 0..K-1
  double epsilon = 0.0;
};

struct LowerBoundDraw {
  Instance instance;
  LowerBoundSecrets secrets;
};

// The adversarial instance: T = 2bn arrivals in n groups of 2b; group-j
// contexts are compatible with resource i iff score(i) >= j; the secret arm
// of each resource clicks with probability (1-eps)/2 + eps, all others with
// (1-eps)/2. OPT equals b*n on every draw.
LowerBoundDraw gen_lower_bound_instance(const LowerBoundParams& params, Rng& rng);

struct HotelParams {
  // Room categories x {low, high} prices; rows follow `category_names`.
  Eigen::MatrixXd price_table;     // n x 2
  bool double_high_price = true;
  Eigen::VectorXi base_inventory;  // n
  double inventory_scale = 1.0;    // scaled counts round up, minimum 1
  Eigen::MatrixXd beta_center;     // 2n x d prior centers, product-major
  double prior_half_width = 1.0;   // epsilon of the uniform box prior
  double v0 = 40.0;
  // Pool of arrival sequences; one path is drawn uniformly per instance.
  std::vector<std::vector<Context>> arrival_pool;

  void validate() const;
};

// Draws beta* from the box prior and an arrival path from the pool, applies
// the price doubling and inventory scaling, and assembles the multi-price
// instance over all assortments of the 2n products.
Instance gen_hotel_instance(const HotelParams& params, Rng& rng);

// Paper-shaped default configuration with synthetic prior centers and
// inventories (the fitted coefficients behind the original study are not
// public). The arrival pool is synthesized by make_hotel_pool.
HotelParams default_hotel_params();

// Synthetic feature-vector paths. Each context is 9-dimensional:
//   x1 = 1 constant, x2 = party size / 4, x3 = vip, x4 = weekend,
//   x5 = advance-booking fraction, x6 = business, x7 = stay nights / 7,
//   x8 = children, x9 = loyalty score.
std::vector<std::vector<Context>> make_hotel_pool(int paths, int approx_length,
                                                  Rng& rng);

// Random small single-reward instance for certificate audits: half matching
// laws, half explicit tabular laws with multi-resource outcomes.
Instance random_small_instance(Rng& rng, int max_n = 4, int max_T = 50, int max_b = 5);

}  // namespace iballoc
