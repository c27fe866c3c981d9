#include "gsgdm/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsgdm {
namespace {

ConditionResidual scalar_condition(std::string name, double residual, bool strict = false) {
  ConditionResidual c;
  c.name = std::move(name);
  c.worst = residual;
  c.strict = strict;
  return c;
}

ValidationReport finish(std::string theorem, std::vector<ConditionResidual> conditions) {
  ValidationReport report;
  report.theorem = std::move(theorem);
  report.conditions = std::move(conditions);
  report.pass = std::all_of(report.conditions.begin(), report.conditions.end(),
                            [](const ConditionResidual& c) { return c.holds(); });
  return report;
}

double relative_gap(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : (lhs - rhs) / scale;
}

}  // namespace

void ConstantSchedule::check() const {
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(eta)) {
    throw std::invalid_argument("schedule parameters must be finite");
  }
  if (beta < 0.0 || beta >= 1.0) throw std::invalid_argument("beta must lie in [0, 1)");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
}

Schedule Schedule::constant(const ConstantSchedule& params) {
  params.check();
  Schedule s;
  s.constant_ = params;
  return s;
}

Schedule Schedule::sequence(std::vector<ScheduleStep> steps) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].k != i + 1) throw std::invalid_argument("schedule table must be indexed 1..n");
  }
  Schedule s;
  s.table_ = std::make_shared<const std::vector<ScheduleStep>>(std::move(steps));
  return s;
}

ScheduleStep Schedule::at(std::size_t k) const {
  if (k == 0) throw std::out_of_range("schedule index starts at 1");
  if (constant_) return ScheduleStep{k, constant_->beta, constant_->gamma, constant_->eta, {}};
  if (!table_ || k > table_->size()) {
    throw std::out_of_range("schedule has no entry for k = " + std::to_string(k));
  }
  return (*table_)[k - 1];
}

bool Schedule::has_theta() const {
  return table_ && !table_->empty() && table_->front().theta.has_value();
}

Schedule AcceleratedSchedule::schedule() const {
  std::vector<ScheduleStep> steps(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    steps[i] = ScheduleStep{i + 1, beta[i], gamma, eta[i], theta[i]};
  }
  return Schedule::sequence(std::move(steps));
}

double accelerated_gamma(double L, std::size_t horizon, double sigma, double C) {
  if (!(L > 0.0)) throw std::invalid_argument("accelerated_gamma: L must be positive");
  if (!(sigma > 0.0) || !(C > 0.0)) {
    throw std::invalid_argument("accelerated_gamma: automatic gamma needs sigma > 0 and C > 0");
  }
  if (horizon == 0) throw std::invalid_argument("accelerated_gamma: horizon must be positive");
  const double t = static_cast<double>(horizon);
  return std::min(1.0 / L, std::pow(t, -0.75) * std::sqrt(C / (sigma * L)));
}

AcceleratedSchedule build_accelerated(double L, std::optional<double> gamma, double beta1,
                                      std::size_t horizon, std::optional<double> sigma,
                                      std::optional<double> C) {
  if (!(L > 0.0)) throw std::invalid_argument("build_accelerated: L must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) {
    throw std::invalid_argument("build_accelerated: beta_1 must lie in [0, 1)");
  }
  if (horizon == 0) throw std::invalid_argument("build_accelerated: horizon must be positive");

  AcceleratedSchedule s;
  s.L = L;
  s.beta1 = beta1;
  s.horizon = horizon;
  s.gamma = gamma ? *gamma : accelerated_gamma(L, horizon, sigma.value_or(0.0), C.value_or(0.0));
  if (!(s.gamma > 0.0) || s.gamma > 1.0 / L) {
    throw std::invalid_argument("build_accelerated: gamma must lie in (0, 1/L]");
  }

  const double g = s.gamma;
  const std::size_t n = horizon + 2;
  s.eta.resize(n);
  s.beta.resize(n);
  s.theta.resize(n);
  s.eta[0] = (L * g * g - g) / (2.0 * (1.0 - beta1));
  s.beta[0] = beta1;
  for (std::size_t k = 1; k <= n; ++k) s.theta[k - 1] = 2.0 / static_cast<double>(k + 2);
  for (std::size_t k = 2; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double prev = s.eta[k - 2];
    const double eta = kd / (kd + 3.0) * prev + ((kd + 1.0) * L * g * g - 2.0 * g) / (kd + 3.0);
    if (eta == 0.0) {
      throw std::domain_error("build_accelerated: eta_" + std::to_string(k) +
                              " is zero, beta_" + std::to_string(k) + " is undefined");
    }
    s.eta[k - 1] = eta;
    s.beta[k - 1] = kd * prev / ((kd + 3.0) * eta);
    if (s.beta[k - 1] < 0.0 || s.beta[k - 1] >= 1.0) s.beta_out_of_range.push_back(k);
  }
  return s;
}

Schedule nag_classic(double gamma, std::size_t horizon) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("nag_classic: gamma must be positive");
  }
  const std::size_t n = horizon + 2;
  std::vector<ScheduleStep> steps(n);
  steps[0] = ScheduleStep{1, 0.0, gamma, 0.0, {}};
  for (std::size_t k = 2; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double momentum = (kd - 1.0) / (kd + 2.0);
    const double prev = steps[k - 2].eta;
    steps[k - 1] = ScheduleStep{k, prev / (prev + gamma), gamma, momentum * (prev + gamma), {}};
  }
  return Schedule::sequence(std::move(steps));
}

bool ConditionResidual::holds() const { return strict ? worst > 0.0 : worst >= -tolerance; }

double representation_error(double beta_k, double beta_next) {
  constexpr double u = std::numeric_limits<double>::epsilon();
  const auto ratio = [](double b) { return b >= 1.0 ? 0.0 : std::abs(b) / (1.0 - b); };
  return 4.0 * u * (ratio(beta_k) + ratio(beta_next));
}

const ConditionResidual& ValidationReport::condition(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no condition named " + name);
}

ValidationReport validate_convex_constant(const ConstantSchedule& s, double L, bool deterministic) {
  if (!(L > 0.0)) throw std::invalid_argument("validate_convex_constant: L must be positive");
  std::vector<ConditionResidual> c;
  c.push_back(scalar_condition("beta-range", s.beta >= 0.0 && s.beta < 1.0 ? 0.0 : -1.0));
  c.push_back(scalar_condition("gamma-nonneg", s.gamma));
  c.push_back(scalar_condition("gamma-max", 1.0 / L - s.gamma));
  if (deterministic) {
    c.push_back(scalar_condition("eta-min", s.eta + s.gamma, true));
    c.push_back(scalar_condition(
        "eta-max", 1.0 / L + (2.0 * s.beta - 1.0) / (1.0 - s.beta) * s.gamma - s.eta));
    return finish("thm-cvx-deter", std::move(c));
  }
  c.push_back(scalar_condition("step-pos", s.gamma + s.eta, true));
  c.push_back(scalar_condition("step-max", 1.0 / L - (s.gamma + s.eta)));
  return finish("thm-cvx-const", std::move(c));
}

ValidationReport validate_nonconvex(const ConstantSchedule& s, double L, bool pl) {
  if (!(L > 0.0)) throw std::invalid_argument("validate_nonconvex: L must be positive");
  const double step = s.gamma + s.eta;
  std::vector<ConditionResidual> c;
  c.push_back(scalar_condition("beta-range", s.beta >= 0.0 && s.beta < 1.0 ? 0.0 : -1.0));
  c.push_back(scalar_condition("gamma-nonneg", s.gamma));
  c.push_back(scalar_condition("eta-pos", s.eta, true));
  c.push_back(scalar_condition("step-pos", step, true));
  double limit = 0.0;
  if (pl) {
    limit = (1.0 - s.beta) / (2.0 * L);
    if (s.beta > 0.0) limit = std::min(limit, (1.0 - s.beta) / (8.0 * s.beta * s.beta * L));
  } else {
    limit = (1.0 - s.beta) / (3.0 * L);
  }
  c.push_back(scalar_condition("step-max", limit - step));
  return finish(pl ? "thm-pl" : "thm-nc", std::move(c));
}

ValidationReport validate_timevarying(const Schedule& schedule, double L, std::size_t horizon) {
  if (!(L > 0.0)) throw std::invalid_argument("validate_timevarying: L must be positive");
  if (horizon < 1) throw std::invalid_argument("validate_timevarying: horizon must be positive");

  // Conditions at k look up theta_{k+2} and (beta, gamma, eta)_{k+1}.
  const std::size_t last = horizon - 1;
  std::vector<ScheduleStep> steps;
  steps.reserve(horizon + 1);
  for (std::size_t k = 1; k <= horizon + 1; ++k) {
    ScheduleStep st = schedule.at(k);
    if (!st.theta || !(*st.theta > 0.0 && *st.theta < 1.0)) {
      throw std::invalid_argument("validate_timevarying: theta_" + std::to_string(k) +
                                  " missing or outside (0, 1)");
    }
    steps.push_back(st);
  }
  const auto at = [&](std::size_t k) -> const ScheduleStep& { return steps[k - 1]; };

  std::vector<ConditionResidual> c(4);
  c[0].name = "cond-beta";
  c[1].name = "lr-0";
  c[1].strict = true;
  c[2].name = "lr-1";
  c[3].name = "lr-2";
  for (auto& cond : c) {
    cond.per_k.assign(last, 0.0);
    cond.worst = std::numeric_limits<double>::infinity();
  }

  for (std::size_t k = 1; k <= last; ++k) {
    const ScheduleStep& s = at(k);
    const ScheduleStep& s1 = at(k + 1);
    const double th = *s.theta;
    const double th1 = *s1.theta;
    double r[4];

    // beta_k eta_k = theta_{k+1} (1/theta_k - 1) eta_{k-1}, multiplied form.
    r[0] = 0.0;
    if (k >= 2) {
      const ScheduleStep& s0 = at(k - 1);
      const double lhs = s.beta * s.eta;
      const double rhs = th1 * (1.0 / th - 1.0) * s0.eta;
      const double scale = std::max(std::abs(s.eta), std::abs(s0.eta));
      r[0] = scale == 0.0 ? 0.0 : -std::abs(lhs - rhs) / scale;
    }

    r[1] = s.gamma + (1.0 - s.beta) / th1 * s.eta;

    // With gamma_k = 0 the condition is read in its multiplied-by-gamma form.
    if (s.gamma > 0.0) {
      r[2] = 2.0 - L * s.gamma - th * (1.0 - s.beta) * s.eta / (th1 * s.gamma) - th;
    } else {
      r[2] = -th * (1.0 - s.beta) * s.eta / th1;
    }

    const double th2 = *at(k + 2).theta;
    const double lhs2 = th / (th1 * s.gamma + (1.0 - s.beta) * s.eta);
    const double rhs2 = th2 / ((1.0 - th1) * (th2 * s1.gamma + (1.0 - s1.beta) * s1.eta));
    r[3] = relative_gap(lhs2, rhs2);
    c[3].tolerance = std::max(c[3].tolerance,
                              kResidualTolerance + representation_error(s.beta, s1.beta));

    for (std::size_t i = 0; i < 4; ++i) {
      c[i].per_k[k - 1] = r[i];
      if (r[i] < c[i].worst) {
        c[i].worst = r[i];
        c[i].worst_k = k;
      }
    }
  }
  std::optional<std::size_t> first_fail;
  for (auto& cond : c) {
    if (last == 0) cond.worst = 0.0;
    for (std::size_t k = 1; k <= last; ++k) {
      const double r = cond.per_k[k - 1];
      const bool ok = cond.strict ? r > 0.0 : r >= -cond.tolerance;
      if (!ok && (!first_fail || k < *first_fail)) first_fail = k;
    }
  }

  ValidationReport report = finish("thm-vary", std::move(c));
  report.first_failing_k = first_fail;
  return report;
}

}  // namespace gsgdm
