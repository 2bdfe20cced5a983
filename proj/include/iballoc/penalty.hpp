#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "iballoc/common.hpp"
#include "iballoc/model.hpp"

namespace iballoc {

// Hedging penalty Psi(w) = (e^w - 1)/(e - 1), convex and increasing from 0
// to 1 on [0,1]. expm1 keeps the endpoints exact.
template <typename Scalar>
Scalar psi(Scalar w) {
  if (!(w >= Scalar(0) && w <= Scalar(1)))
    throw DomainError("psi: argument must lie in [0,1]");
  return std::expm1(w) / std::expm1(Scalar(1));
}

// Discounted reward r_i * (1 - Psi(N/b)); zero once the resource is depleted.
template <typename Scalar>
Scalar discounted_reward(Scalar reward, int consumed, int inventory) {
  if (consumed < 0 || consumed > inventory)
    throw StateCorruption("discounted_reward: consumption outside [0, b]");
  return reward * (Scalar(1) - psi(Scalar(consumed) / Scalar(inventory)));
}

// Competitive factor (1 + b_min)(1 - e^{-1/b_min}) / (1 - 1/e); decreases to
// e/(e-1) as b_min grows.
template <typename Scalar>
Scalar competitive_factor(int b_min) {
  if (b_min < 1) throw DomainError("competitive_factor: b_min must be >= 1");
  const Scalar b = Scalar(b_min);
  return -(Scalar(1) + b) * std::expm1(-Scalar(1) / b) / (-std::expm1(Scalar(-1)));
}

// Multi-price variant: the denominator 1 - 1/e is replaced by
// 1 - exp(-min_i alpha_i^{(1)}).
template <typename Scalar>
Scalar competitive_factor(int b_min, Scalar min_alpha1) {
  if (b_min < 1) throw DomainError("competitive_factor: b_min must be >= 1");
  if (!(min_alpha1 > Scalar(0)))
    throw DomainError("competitive_factor: alpha^(1) must be positive");
  const Scalar b = Scalar(b_min);
  return -(Scalar(1) + b) * std::expm1(-Scalar(1) / b) / (-std::expm1(-min_alpha1));
}

// Virtual cost curve for one resource: increases from 0 to max P_i over
// [0,1]. Either the analytic max P_i * Psi(w) (exact, the default and the
// singleton-price specialization) or a supplied monotone knot table with
// linear interpolation.
class PhiCurve {
 public:
  // Phi(w) = scale * Psi(w).
  static PhiCurve scaled_psi(double scale);
  // Knots (w, phi) with w ascending from 0 to 1, phi strictly increasing,
  // phi(0) = 0 and phi(1) = max price.
  static PhiCurve table(std::vector<std::pair<double, double>> knots);

  double operator()(double w) const;
  double max_value() const;  // Phi(1)
  bool is_table() const { return !knots_.empty(); }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  double scale() const { return scale_; }

 private:
  double scale_ = 0.0;                           // scaled-psi form
  std::vector<std::pair<double, double>> knots_; // table form
};

struct SinglePriceSchedule {};

struct MultiPriceSchedule {
  std::vector<PhiCurve> phi;      // one per resource
  std::vector<double> alpha1;     // ratio constants, one per resource

  double min_alpha1() const;
};

using PenaltySchedule = std::variant<SinglePriceSchedule, MultiPriceSchedule>;

// Default schedule for an instance: single-price instances need no
// parameters; multi-price instances get Phi_i = max P_i * Psi and
// alpha_i = 1 unless configured otherwise.
PenaltySchedule default_schedule(const Instance& inst);

// Eq.-13 virtual reward P - Phi_i(N/b). May be negative.
double virtual_reward_multiprice(double price, const PenaltySchedule& schedule,
                                 const Instance& inst, int resource, int consumed);

// The guarantee factor for an instance/schedule pair: the single-price form
// for single-price schedules, the min-alpha form otherwise.
double guarantee_factor(const Instance& inst, const PenaltySchedule& schedule);

// Per-index virtual rewards for period t given the start-of-period counters:
// discounted rewards per resource (single-reward) or P - Phi_i per combo.
Eigen::VectorXd virtual_rewards(const Instance& inst, const PenaltySchedule& schedule,
                                const Eigen::VectorXi& consumed);

void validate_schedule(const PenaltySchedule& schedule, const Instance& inst);

}  // namespace iballoc
