#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <vector>

#include "iballoc/common.hpp"
#include "iballoc/model.hpp"

namespace iballoc {

// Confidence radius sqrt(alpha * mu / N) + (alpha + 1) / N.
template <typename Scalar>
Scalar rad(Scalar alpha, Scalar mu, Scalar n) {
  if (!(n > Scalar(0))) throw DomainError("rad: N must be positive");
  return std::sqrt(alpha * mu / n) + (alpha + Scalar(1)) / n;
}

// Everything an oracle sees at the start of period t. Virtual rewards are
// per resource (single-reward) or per combo (multi-price); allowed_actions,
// when set, is the ascending list of playable action indices.
struct OracleInput {
  int period = 1;
  const Context* context = nullptr;
  const Eigen::VectorXd* virtual_rewards = nullptr;
  const std::vector<int>* allowed_actions = nullptr;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual Action select(const OracleInput& in, Rng& rng) = 0;
  virtual void update(const Context& x, Action a, const Outcome& y) {}
};

// Exact argmax_a of the expected auxiliary reward under the true law,
// restricted to `allowed` when given. Ties break to the lowest action index.
// Returns the none action only when the action set is empty.
Action best_action(const Instance& inst, const Context& x,
                   const Eigen::VectorXd& virtual_rewards,
                   const std::vector<int>* allowed = nullptr);

// Zero-regret oracle: plays best_action under the true law.
class ClairvoyantLearner final : public Learner {
 public:
  explicit ClairvoyantLearner(const Instance& inst) : inst_(inst) {}
  Action select(const OracleInput& in, Rng&) override;

 private:
  const Instance& inst_;
};

// UCB oracle for the matching setting. Plays the arm maximizing
// r_i^t * (pbar + U) * 1(x_i = 1) with pbar = successes / (count + 1) and
// U = rad(scale * ln(2 n K t^2), pbar, count + 1).
class UcbLearner final : public Learner {
 public:
  UcbLearner(int num_resources, int arms_per_resource, double confidence_scale = 72.0);

  Action select(const OracleInput& in, Rng&) override;
  void update(const Context& x, Action a, const Outcome& y) override;

  long eligible_count(int i, int k) const { return counts_(i, k); }
  long success_sum(int i, int k) const { return successes_(i, k); }
  double estimate(int i, int k) const;           // pbar at the current state
  double confidence_width(int i, int k, int period) const;  // U at the current state

 private:
  int n_, arms_;
  double scale_;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts_, successes_;
};

struct TsMnlOptions {
  double prior_half_width = 1.0;  // epsilon of the uniform box prior
  double newton_tol = 1e-8;
  int newton_max_iter = 100;
  // Weight of the log barrier standing in for the box prior; 1.5 makes the
  // no-data Laplace variance match the uniform prior's epsilon^2 / 3.
  double barrier_weight = 1.5;
};

// Thompson sampling for MNL assortments, with a Laplace (Gaussian at the
// posterior mode) summary per product. The no-purchase weight v0 is model
// structure and known to the learner; only the product vectors are learned.
class TsMnlLearner final : public Learner {
 public:
  TsMnlLearner(const Instance& inst, Eigen::MatrixXd prior_center,
               TsMnlOptions options = {});

  Action select(const OracleInput& in, Rng& rng) override;
  void update(const Context& x, Action a, const Outcome& y) override;

  bool degraded() const { return degraded_; }
  const Eigen::MatrixXd& posterior_mode() const { return mode_; }
  const Eigen::MatrixXd& posterior_curvature(int product) const {
    return curvature_[product];
  }

  // Exposed for the point-mass test path: samples one parameter matrix.
  Eigen::MatrixXd sample_parameters(Rng& rng) const;

 private:
  struct Observation {
    Context x;
    std::vector<int> offered;
    int purchased = -1;  // combo index, -1 for no purchase
  };

  double log_posterior(const Eigen::MatrixXd& beta) const;
  void gradient_hessian(const Eigen::MatrixXd& beta, Eigen::VectorXd& grad,
                        Eigen::MatrixXd& hess) const;
  void refit();

  const AssortmentFamily& family_;
  double v0_;
  int m_, d_;
  Eigen::MatrixXd prior_center_;
  TsMnlOptions opt_;
  std::vector<Observation> log_;
  Eigen::MatrixXd mode_;                   // m x d
  std::vector<Eigen::MatrixXd> curvature_; // per product, d x d, PD
  bool have_fit_ = false;
  bool degraded_ = false;
};

}  // namespace iballoc
