#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsgdm/types.hpp"

namespace gsgdm {

struct ConstantSchedule {
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;

  /// Throws std::invalid_argument unless beta in [0,1), gamma >= 0 and all finite.
  void check() const;
};

/// Source of per-iteration parameters: either one constant triple or a table
/// materialized for k = 1..length(). Copies share the table.
class Schedule {
 public:
  static Schedule constant(const ConstantSchedule& params);
  /// steps[i].k must equal i + 1.
  static Schedule sequence(std::vector<ScheduleStep> steps);

  /// Throws std::out_of_range past the end of a table.
  ScheduleStep at(std::size_t k) const;

  /// Table length, 0 for a constant schedule (unbounded).
  std::size_t length() const { return table_ ? table_->size() : 0; }
  bool is_constant() const { return constant_.has_value(); }
  const std::optional<ConstantSchedule>& constant_params() const { return constant_; }
  bool has_theta() const;

 private:
  std::optional<ConstantSchedule> constant_;
  std::shared_ptr<const std::vector<ScheduleStep>> table_;
};

/// Time-varying schedule with gamma_k = gamma, theta_k = 2/(k+2),
///   eta_1 = (L gamma^2 - gamma) / (2 (1 - beta_1)),
///   eta_k = k/(k+3) eta_{k-1} + ((k+1) L gamma^2 - 2 gamma)/(k+3),
///   beta_k = k eta_{k-1} / ((k+3) eta_k),
/// materialized for k = 1..horizon+2 so that every condition at k <= horizon
/// can look two steps ahead.
struct AcceleratedSchedule {
  double L = 0.0;
  double gamma = 0.0;
  double beta1 = 0.0;
  std::size_t horizon = 0;
  std::vector<double> eta;    // index k-1
  std::vector<double> beta;   // index k-1
  std::vector<double> theta;  // index k-1
  /// Iterations whose beta_k left [0, 1). Reported, not rejected.
  std::vector<std::size_t> beta_out_of_range;

  Schedule schedule() const;
};

/// gamma = min{1/L, t^{-3/4} sqrt(C / (sigma L))}.
double accelerated_gamma(double L, std::size_t horizon, double sigma, double C);

/// With `gamma` absent the step is chosen by accelerated_gamma, which needs
/// sigma > 0 and C > 0. Throws std::invalid_argument when gamma is outside
/// (0, 1/L] and std::domain_error naming k when some eta_k (k >= 2) is zero.
AcceleratedSchedule build_accelerated(double L, std::optional<double> gamma, double beta1,
                                      std::size_t horizon, std::optional<double> sigma = {},
                                      std::optional<double> C = {});

/// Classical Nesterov momentum (k-1)/(k+2) with step gamma, embedded exactly:
/// gamma_k = gamma, beta_1 = eta_1 = 0, beta_k = eta_{k-1}/(eta_{k-1}+gamma),
/// eta_k = (k-1)/(k+2) (eta_{k-1} + gamma). Materialized for k = 1..horizon+2.
Schedule nag_classic(double gamma, std::size_t horizon);

inline constexpr double kResidualTolerance = 1e-12;

/// Worst residual of one inequality. A residual >= 0 means the inequality holds;
/// strict inequalities need a residual > 0.
struct ConditionResidual {
  std::string name;
  double worst = 0.0;
  std::size_t worst_k = 0;
  bool strict = false;
  /// Non-strict conditions hold when worst >= -tolerance.
  double tolerance = kResidualTolerance;
  std::vector<double> per_k;  // time-varying checks only, index k-1
  bool holds() const;
};

struct ValidationReport {
  std::string theorem;
  bool pass = true;
  std::vector<ConditionResidual> conditions;
  std::optional<std::size_t> first_failing_k;

  const ConditionResidual& condition(const std::string& name) const;
};

/// 4u (beta_k/(1 - beta_k) + beta_{k+1}/(1 - beta_{k+1})): first-order relative
/// error that rounding beta_k and beta_{k+1} to doubles puts on the
/// (1 - beta) eta terms.
double representation_error(double beta_k, double beta_next);

/// Constant-parameter convex theorems: stochastic requires gamma <= 1/L and
/// 0 < gamma + eta <= 1/L; deterministic requires gamma <= 1/L and
/// -gamma < eta <= 1/L + gamma (2 beta - 1)/(1 - beta).
ValidationReport validate_convex_constant(const ConstantSchedule& s, double L, bool deterministic);

/// Time-varying theorem conditions at k = 1..horizon-1: the momentum/theta
/// coupling (from k = 2), positive effective step, the gamma-side bound and
/// the monotone p_k condition. Throws std::invalid_argument when a theta is
/// missing or outside (0, 1).
///
/// A stored beta_k near 1 fixes 1 - beta_k only to about u beta_k/(1 - beta_k)
/// relative, so the p_k condition, which is an equality for the accelerated
/// schedule, gets that much extra tolerance (see representation_error).
ValidationReport validate_timevarying(const Schedule& schedule, double L, std::size_t horizon);

/// Nonconvex: 0 < gamma + eta <= (1 - beta)/(3L). PL: 0 < gamma + eta <=
/// min{(1-beta)/(2L), (1-beta)/(8 beta^2 L)}. Both require eta > 0.
ValidationReport validate_nonconvex(const ConstantSchedule& s, double L, bool pl);

}  // namespace gsgdm
