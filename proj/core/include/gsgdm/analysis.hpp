#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsgdm/schedules.hpp"
#include "gsgdm/types.hpp"

namespace gsgdm {

enum class TheoremId {
  kCvxConst,         // thm-cvx-const: ergodic gap, constant parameters, stochastic
  kCvxDeter,         // thm-cvx-deter: ergodic gap, constant parameters, sigma = 0
  kAccelDet,         // thm-accel-det: f(y_t) gap under a time-varying schedule, sigma = 0
  kAccelStoch,       // thm-accel-stoch: same with the sigma^2 sum
  kNonconvex,        // thm-nc: running mean of |grad f(x_k)|^2
  kPl,               // thm-pl: f(w_{t+1}) gap
  kMomentumVariance  // lem-m-var: E|m_k|^2
};

std::string_view theorem_name(TheoremId id);
/// Throws std::invalid_argument for an unknown name.
TheoremId parse_theorem(std::string_view name);

/// gamma_k + (1 - beta_k) eta_k / theta_{k+1}.
double effective_step(const ScheduleStep& step, double theta_next);
double effective_step(const Schedule& schedule, std::size_t k);

/// Running product of (1 - theta_j) kept as an unevaluated sum hi + lo, so
/// both the subtraction and each multiplication are carried without rounding
/// error; after 10^6 factors the value is still within a few ulps of exact.
class ThetaProduct {
 public:
  void times_one_minus(double theta);
  double value() const { return hi_ + lo_; }

 private:
  double hi_ = 1.0;
  double lo_ = 0.0;
};

/// Online Phi_k = (f(y_k) - f*) / Theta_{k-1} + p_k |v_k - x*|^2 with
/// Theta_0 = 1, Theta_k = (1 - theta_k) Theta_{k-1} and
/// p_k = theta_k / (2 gamma~_k Theta_k). Feed k = 1, 2, ... in order.
class LyapunovStatePhi {
 public:
  explicit LyapunovStatePhi(Schedule schedule);

  /// Throws std::domain_error when gamma~_k <= 0.
  double advance(double f_y_gap, const Vec& v, const Vec& x_star);

  std::size_t k() const { return k_; }
  /// Theta_k after the last advance (Theta_0 before the first).
  double Theta() const { return theta_prod_.value(); }
  double p() const { return p_; }
  double phi() const { return phi_; }

 private:
  Schedule schedule_;
  std::size_t k_ = 0;
  ThetaProduct theta_prod_;
  double p_ = 0.0;
  double phi_ = 0.0;
};

/// Theta_k by direct product (Theta_0 = 1).
double Theta(const Schedule& schedule, std::size_t k);

/// Phi_k with Theta_{k-1} and Theta_k recomputed from scratch.
double phi(std::size_t k, double f_y_gap, const Vec& v, const Vec& x_star,
           const Schedule& schedule);

/// Phi_1 = f1_gap + theta_1 theta_2 / (2 (1 - theta_1)(theta_2 gamma_1 + (1 - beta_1) eta_1)) |x_1 - x*|^2.
double phi1(const Schedule& schedule, double f1_gap, double dist1_sq);

struct PlConstants {
  double M = 0.0;
  double C = 0.0;
};

/// M = (gamma+eta) - L (gamma+eta)^2/(1-beta) - L (gamma+eta)^2/2 and
///   C = (beta^2 L eta^2/2 + M mu (mu+L) beta^2 eta^2/(1-beta))
///       / (1 - beta - mu M + mu (mu+L) beta^2 eta^2/(1-beta)).
/// Throws std::domain_error when the denominator of C is not positive.
PlConstants pl_constants(const ConstantSchedule& s, double L, double mu);

/// Online varphi_k = f(w_k) - f* + C S_k, S_1 = 0, S_{k+1} = beta S_k + |grad f(x_k)|^2.
class LyapunovStateVarphi {
 public:
  LyapunovStateVarphi(const ConstantSchedule& s, double L, double mu);

  /// varphi at the current k; then folds |grad f(x_k)|^2 into the sum.
  double advance(double f_w_gap, double grad_sq);

  const PlConstants& constants() const { return constants_; }
  double geometric_sum() const { return sum_; }
  double varphi() const { return varphi_; }

 private:
  PlConstants constants_;
  double beta_;
  double sum_ = 0.0;
  double varphi_ = 0.0;
};

/// varphi_k by direct summation over grad_history = |grad f(x_j)|^2, j = 1..k-1.
double varphi(std::size_t k, double f_w_gap, std::span<const double> grad_history,
              const ConstantSchedule& s, double L, double mu);

/// Everything a bound might need. Fields irrelevant to the theorem are ignored;
/// missing required ones raise std::invalid_argument.
struct BoundInputs {
  double L = 0.0;
  std::optional<double> mu;
  double sigma = 0.0;
  double f_star = 0.0;
  std::optional<ConstantSchedule> constant;
  std::optional<Schedule> schedule;  // theta-bearing, time-varying theorems
  double f1_gap = 0.0;
  double dist1_sq = 0.0;
  double grad1_sq = 0.0;
};

/// Right-hand side of the theorem at horizon t >= 1 (t >= 0 for thm-pl).
/// Not defined for lem-m-var, which depends on the gradient history (see mbound).
double bound_rhs(TheoremId id, const BoundInputs& in, std::size_t t);

/// bound_rhs for t = 1..T in O(T). Entry t-1 holds horizon t.
std::vector<double> bound_series(TheoremId id, const BoundInputs& in, std::size_t T);

/// Closed forms for the accelerated schedule with gamma = 1/L (sigma = 0)
/// and with the horizon-tuned gamma (sigma > 0, valid at t = horizon).
double accel_det_closed_form(double L, double f1_gap, double dist1_sq, std::size_t t);
double accel_stoch_closed_form(double L, double f1_gap, double dist1_sq, std::size_t t,
                               double sigma, double C);

/// 2(1-beta) sum_{j=1}^k beta^{k-j} grad_sq[j-1] + 2(1-beta) sigma^2/(1+beta).
double mbound(std::size_t k, std::span<const double> grad_sq_history, double beta, double sigma);

struct VerificationReport {
  TheoremId theorem = TheoremId::kCvxConst;
  bool pass = true;
  double max_violation = 0.0;
  std::optional<std::size_t> first_t;
  std::vector<std::size_t> t;
  std::vector<double> mean;
  std::vector<double> se;
  std::vector<double> rhs;
};

struct VerifyOptions {
  /// Horizons to compare; empty means every t the traces support.
  std::vector<std::size_t> checkpoints;
};

/// Compare the seed mean of the theorem's empirical quantity with its RHS.
/// A horizon violates when mean - rhs - 2 se exceeds a rounding slack of
/// 1e-12 max(1, |rhs|); se is the sample standard error over runs (0 for one run).
/// Throws std::invalid_argument when a needed column is missing.
VerificationReport verify_trace(std::span<const std::vector<TraceRow>> runs, TheoremId id,
                                const BoundInputs& in, const VerifyOptions& options = {});

/// "THEOREM <id>: PASS|FAIL max_violation=<v> first_t=<t|none>"
std::string format_report(const VerificationReport& report);

}  // namespace gsgdm
