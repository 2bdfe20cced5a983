#include "iballoc/learners.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace iballoc {

namespace {

// Shared argmax skeleton: `value(idx)` scored over `allowed` (or all
// `count` indices), first maximum wins.
template <typename ValueFn>
Action argmax_action(int count, const std::vector<int>* allowed, ValueFn&& value) {
  double best = -std::numeric_limits<double>::infinity();
  int best_idx = -1;
  auto consider = [&](int idx) {
    const double v = value(idx);
    if (v > best) {
      best = v;
      best_idx = idx;
    }
  };
  if (allowed) {
    for (int idx : *allowed) consider(idx);
  } else {
    for (int idx = 0; idx < count; ++idx) consider(idx);
  }
  return best_idx >= 0 ? Action(best_idx) : Action::none();
}

}  // namespace

Action best_action(const Instance& inst, const Context& x,
                   const Eigen::VectorXd& virtual_rewards,
                   const std::vector<int>* allowed) {
  const int count = action_count(inst);

  if (const auto* m = std::get_if<MatchingLaw>(&inst.law)) {
    const int K = inst.matching().arms_per_resource;
    return argmax_action(count, allowed, [&](int idx) {
      const int i = idx / K, k = idx % K;
      return x[i] == 1.0 ? m->click_prob(i, k) * virtual_rewards[i] : 0.0;
    });
  }
  if (const auto* mnl = std::get_if<MnlLaw>(&inst.law)) {
    const auto& fam = inst.assortments();
    Eigen::VectorXd utils = mnl->beta * x;
    const double shift = std::max(std::log(mnl->v0), utils.maxCoeff());
    const Eigen::VectorXd w = (utils.array() - shift).exp();
    const double w0 = std::exp(std::log(mnl->v0) - shift);
    return argmax_action(count, allowed, [&](int idx) {
      double num = 0.0, den = w0;
      for (int c : fam.sets[idx]) {
        num += w[c] * virtual_rewards[c];
        den += w[c];
      }
      return num / den;
    });
  }
  return argmax_action(count, allowed, [&](int idx) {
    return expected_auxiliary_reward(inst, x, Action(idx), virtual_rewards);
  });
}

Action ClairvoyantLearner::select(const OracleInput& in, Rng&) {
  return best_action(inst_, *in.context, *in.virtual_rewards, in.allowed_actions);
}

UcbLearner::UcbLearner(int num_resources, int arms_per_resource, double confidence_scale)
    : n_(num_resources), arms_(arms_per_resource), scale_(confidence_scale) {
  if (n_ < 1 || arms_ < 1) throw ConfigError("UcbLearner: empty arm grid");
  if (!(scale_ > 0.0)) throw ConfigError("UcbLearner: confidence scale must be positive");
  counts_.setZero(n_, arms_);
  successes_.setZero(n_, arms_);
}

double UcbLearner::estimate(int i, int k) const {
  return static_cast<double>(successes_(i, k)) / static_cast<double>(counts_(i, k) + 1);
}

double UcbLearner::confidence_width(int i, int k, int period) const {
  const double alpha =
      scale_ * std::log(2.0 * n_ * arms_ * static_cast<double>(period) * period);
  return rad(alpha, estimate(i, k), static_cast<double>(counts_(i, k) + 1));
}

Action UcbLearner::select(const OracleInput& in, Rng&) {
  const Context& x = *in.context;
  const Eigen::VectorXd& vr = *in.virtual_rewards;
  double best = -std::numeric_limits<double>::infinity();
  int best_idx = -1;
  for (int i = 0; i < n_; ++i) {
    if (x[i] != 1.0) continue;
    for (int k = 0; k < arms_; ++k) {
      const double score =
          vr[i] * (estimate(i, k) + confidence_width(i, k, in.period));
      if (score > best) {
        best = score;
        best_idx = i * arms_ + k;
      }
    }
  }
  return best_idx >= 0 ? Action(best_idx) : Action::none();
}

void UcbLearner::update(const Context& x, Action a, const Outcome& y) {
  if (a.is_none()) return;
  const int i = a.index / arms_, k = a.index % arms_;
  if (x[i] != 1.0) return;  // period not in D_(i,k)
  ++counts_(i, k);
  if (y.contains(i)) ++successes_(i, k);
}

TsMnlLearner::TsMnlLearner(const Instance& inst, Eigen::MatrixXd prior_center,
                           TsMnlOptions options)
    : family_(inst.assortments()),
      v0_(std::get<MnlLaw>(inst.law).v0),
      m_(static_cast<int>(family_.combos.size())),
      d_(static_cast<int>(prior_center.cols())),
      prior_center_(std::move(prior_center)),
      opt_(options) {
  if (prior_center_.rows() != m_)
    throw ConfigError("TsMnlLearner: prior center must have one row per combo");
  if (opt_.prior_half_width < 0.0)
    throw ConfigError("TsMnlLearner: prior half-width must be >= 0");
  mode_ = prior_center_;
}

Eigen::MatrixXd TsMnlLearner::sample_parameters(Rng& rng) const {
  const double eps = opt_.prior_half_width;
  if (eps == 0.0) return prior_center_;  // point-mass prior
  Eigen::MatrixXd beta(m_, d_);
  if (!have_fit_) {
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < d_; ++k)
        beta(j, k) = prior_center_(j, k) + eps * (2.0 * rng.next_double() - 1.0);
    return beta;
  }
  for (int j = 0; j < m_; ++j) {
    Eigen::VectorXd z(d_);
    for (int k = 0; k < d_; ++k) z[k] = rng.normal();
    const Eigen::LLT<Eigen::MatrixXd> llt(curvature_[j]);
    if (llt.info() != Eigen::Success)
      throw StateCorruption("TsMnlLearner: curvature not positive definite");
    // beta_j = mode_j + L^{-T} z has covariance curvature^{-1}.
    beta.row(j) =
        mode_.row(j) + llt.matrixU().solve(z).transpose();
  }
  return beta;
}

Action TsMnlLearner::select(const OracleInput& in, Rng& rng) {
  const Context& x = *in.context;
  const Eigen::VectorXd& vr = *in.virtual_rewards;
  const Eigen::MatrixXd beta = sample_parameters(rng);

  Eigen::VectorXd utils = beta * x;
  const double shift = std::max(std::log(v0_), utils.maxCoeff());
  const Eigen::VectorXd w = (utils.array() - shift).exp();
  const double w0 = std::exp(std::log(v0_) - shift);

  double best = -std::numeric_limits<double>::infinity();
  int best_idx = -1;
  auto consider = [&](int idx) {
    double num = 0.0, den = w0;
    for (int c : family_.sets[idx]) {
      num += w[c] * vr[c];
      den += w[c];
    }
    const double v = num / den;
    if (v > best) {
      best = v;
      best_idx = idx;
    }
  };
  if (in.allowed_actions) {
    for (int idx : *in.allowed_actions) consider(idx);
  } else {
    for (int idx = 0; idx < static_cast<int>(family_.sets.size()); ++idx) consider(idx);
  }
  if (best_idx < 0) throw ConfigError("TsMnlLearner: empty feasible family");
  return Action(best_idx);
}

void TsMnlLearner::update(const Context& x, Action a, const Outcome& y) {
  if (a.is_none()) return;
  const auto& offered = family_.sets.at(a.index);
  if (offered.empty()) return;  // no information in an empty offer
  Observation obs;
  obs.x = x;
  obs.offered = offered;
  if (!y.consumed.empty()) {
    obs.purchased = y.consumed.front();
    if (!std::binary_search(offered.begin(), offered.end(), obs.purchased))
      throw MalformedTrace("purchase outside the offered assortment");
  }
  log_.push_back(std::move(obs));
  if (opt_.prior_half_width == 0.0) return;  // posterior stays the point mass
  refit();
}

double TsMnlLearner::log_posterior(const Eigen::MatrixXd& beta) const {
  const double eps = opt_.prior_half_width;
  double f = 0.0;
  // Box-prior barrier.
  for (int j = 0; j < m_; ++j) {
    for (int k = 0; k < d_; ++k) {
      const double delta = beta(j, k) - prior_center_(j, k);
      if (!(std::abs(delta) < eps)) return -std::numeric_limits<double>::infinity();
      f += opt_.barrier_weight * (std::log(eps - delta) + std::log(eps + delta));
    }
  }
  const double log_v0 = std::log(v0_);
  for (const auto& obs : log_) {
    double shift = log_v0;
    std::vector<double> utils(obs.offered.size());
    for (std::size_t j = 0; j < obs.offered.size(); ++j) {
      utils[j] = beta.row(obs.offered[j]).dot(obs.x);
      shift = std::max(shift, utils[j]);
    }
    double denom = std::exp(log_v0 - shift);
    for (double u : utils) denom += std::exp(u - shift);
    const double log_denom = shift + std::log(denom);
    double chosen = log_v0;
    for (std::size_t j = 0; j < obs.offered.size(); ++j)
      if (obs.offered[j] == obs.purchased) chosen = utils[j];
    f += chosen - log_denom;
  }
  return f;
}

void TsMnlLearner::gradient_hessian(const Eigen::MatrixXd& beta, Eigen::VectorXd& grad,
                                    Eigen::MatrixXd& hess) const {
  const int dim = m_ * d_;
  const double eps = opt_.prior_half_width;
  grad.setZero(dim);
  hess.setZero(dim, dim);

  for (int j = 0; j < m_; ++j) {
    for (int k = 0; k < d_; ++k) {
      const double delta = beta(j, k) - prior_center_(j, k);
      const int idx = j * d_ + k;
      grad[idx] += opt_.barrier_weight * (1.0 / (eps + delta) - 1.0 / (eps - delta));
      hess(idx, idx) -= opt_.barrier_weight *
                        (1.0 / ((eps + delta) * (eps + delta)) +
                         1.0 / ((eps - delta) * (eps - delta)));
    }
  }

  const double log_v0 = std::log(v0_);
  for (const auto& obs : log_) {
    const int sz = static_cast<int>(obs.offered.size());
    Eigen::VectorXd utils(sz);
    for (int j = 0; j < sz; ++j) utils[j] = beta.row(obs.offered[j]).dot(obs.x);
    const double shift = std::max(log_v0, utils.maxCoeff());
    Eigen::VectorXd w = (utils.array() - shift).exp();
    const double denom = std::exp(log_v0 - shift) + w.sum();
    const Eigen::VectorXd p = w / denom;

    for (int j = 0; j < sz; ++j) {
      const double coef = (obs.offered[j] == obs.purchased ? 1.0 : 0.0) - p[j];
      grad.segment(obs.offered[j] * d_, d_) += coef * obs.x;
    }
    // Hessian blocks: (p_j p_j' - delta_jj' p_j) * x x^T.
    const Eigen::MatrixXd xx = obs.x * obs.x.transpose();
    for (int j = 0; j < sz; ++j) {
      for (int j2 = 0; j2 < sz; ++j2) {
        const double coef = p[j] * p[j2] - (j == j2 ? p[j] : 0.0);
        hess.block(obs.offered[j] * d_, obs.offered[j2] * d_, d_, d_) += coef * xx;
      }
    }
  }
}

void TsMnlLearner::refit() {
  const double eps = opt_.prior_half_width;
  Eigen::MatrixXd theta = have_fit_ ? mode_ : prior_center_;
  double f = log_posterior(theta);

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  bool converged = false;
  for (int iter = 0; iter < opt_.newton_max_iter; ++iter) {
    gradient_hessian(theta, grad, hess);
    if (grad.lpNorm<Eigen::Infinity>() < opt_.newton_tol) {
      converged = true;
      break;
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(-hess);
    Eigen::VectorXd step = ldlt.solve(grad);
    const Eigen::Map<const Eigen::MatrixXd> step_mat(step.data(), d_, m_);

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-10) {
      Eigen::MatrixXd candidate = theta + alpha * step_mat.transpose();
      bool inside = true;
      for (int j = 0; j < m_ && inside; ++j)
        for (int k = 0; k < d_; ++k)
          if (!(std::abs(candidate(j, k) - prior_center_(j, k)) < eps)) {
            inside = false;
            break;
          }
      if (inside) {
        const double fc = log_posterior(candidate);
        if (fc >= f - 1e-12 * (1.0 + std::abs(f))) {
          theta = std::move(candidate);
          f = fc;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      converged = true;  // numerical stationarity: no admissible ascent step
      break;
    }
  }

  if (!converged) {
    degraded_ = true;  // keep the previous summary
    return;
  }

  gradient_hessian(theta, grad, hess);
  std::vector<Eigen::MatrixXd> curvature(m_);
  for (int j = 0; j < m_; ++j)
    curvature[j] = -hess.block(j * d_, j * d_, d_, d_);
  mode_ = std::move(theta);
  curvature_ = std::move(curvature);
  have_fit_ = true;
}

}  // namespace iballoc
