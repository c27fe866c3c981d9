#include "gsgdm/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "gsgdm/trace.hpp"

namespace gsgdm {
namespace {

constexpr std::array<std::pair<TheoremId, std::string_view>, 7> kNames{{
    {TheoremId::kCvxConst, "thm-cvx-const"},
    {TheoremId::kCvxDeter, "thm-cvx-deter"},
    {TheoremId::kAccelDet, "thm-accel-det"},
    {TheoremId::kAccelStoch, "thm-accel-stoch"},
    {TheoremId::kNonconvex, "thm-nc"},
    {TheoremId::kPl, "thm-pl"},
    {TheoremId::kMomentumVariance, "lem-m-var"},
}};

double theta_at(const Schedule& schedule, std::size_t k) {
  const auto theta = schedule.at(k).theta;
  if (!theta) throw std::invalid_argument("schedule carries no theta sequence");
  return *theta;
}

const ConstantSchedule& need_constant(const BoundInputs& in, TheoremId id) {
  if (!in.constant) {
    throw std::invalid_argument(std::string(theorem_name(id)) + " needs constant parameters");
  }
  return *in.constant;
}

const Schedule& need_schedule(const BoundInputs& in, TheoremId id) {
  if (!in.schedule || !in.schedule->has_theta()) {
    throw std::invalid_argument(std::string(theorem_name(id)) + " needs a theta-bearing schedule");
  }
  return *in.schedule;
}

double need_mu(const BoundInputs& in) {
  if (!in.mu || !(*in.mu > 0.0)) throw std::invalid_argument("thm-pl needs mu > 0");
  return *in.mu;
}

}  // namespace

std::string_view theorem_name(TheoremId id) {
  for (const auto& [key, name] : kNames) {
    if (key == id) return name;
  }
  return "unknown";
}

TheoremId parse_theorem(std::string_view name) {
  for (const auto& [key, n] : kNames) {
    if (n == name) return key;
  }
  throw std::invalid_argument("unknown theorem id: " + std::string(name));
}

double effective_step(const ScheduleStep& step, double theta_next) {
  return step.gamma + (1.0 - step.beta) / theta_next * step.eta;
}

double effective_step(const Schedule& schedule, std::size_t k) {
  return effective_step(schedule.at(k), theta_at(schedule, k + 1));
}

void ThetaProduct::times_one_minus(double theta) {
  // 1 - theta as f_hi + f_lo exactly (|1| >= |theta|), then an exact product via fma.
  const double f_hi = 1.0 - theta;
  const double f_lo = (1.0 - f_hi) - theta;
  const double h = hi_ * f_hi;
  const double err = std::fma(hi_, f_hi, -h);
  const double lo = lo_ * f_hi + hi_ * f_lo + err;
  hi_ = h + lo;
  lo_ = lo - (hi_ - h);
}

LyapunovStatePhi::LyapunovStatePhi(Schedule schedule) : schedule_(std::move(schedule)) {
  if (!schedule_.has_theta()) throw std::invalid_argument("Phi needs a theta-bearing schedule");
}

double LyapunovStatePhi::advance(double f_y_gap, const Vec& v, const Vec& x_star) {
  ++k_;
  const double theta = theta_at(schedule_, k_);
  const double step = effective_step(schedule_, k_);
  if (!(step > 0.0)) {
    throw std::domain_error("effective step at k = " + std::to_string(k_) + " is not positive");
  }
  const double prev = theta_prod_.value();
  theta_prod_.times_one_minus(theta);
  p_ = theta / (2.0 * step * theta_prod_.value());
  phi_ = f_y_gap / prev + p_ * (v - x_star).squaredNorm();
  return phi_;
}

double Theta(const Schedule& schedule, std::size_t k) {
  ThetaProduct prod;
  for (std::size_t j = 1; j <= k; ++j) prod.times_one_minus(theta_at(schedule, j));
  return prod.value();
}

double phi(std::size_t k, double f_y_gap, const Vec& v, const Vec& x_star,
           const Schedule& schedule) {
  if (k == 0) throw std::invalid_argument("phi is defined for k >= 1");
  const double prev = Theta(schedule, k - 1);
  const double cur = Theta(schedule, k);
  const double step = effective_step(schedule, k);
  if (!(step > 0.0)) {
    throw std::domain_error("effective step at k = " + std::to_string(k) + " is not positive");
  }
  return f_y_gap / prev + theta_at(schedule, k) / (2.0 * step * cur) * (v - x_star).squaredNorm();
}

double phi1(const Schedule& schedule, double f1_gap, double dist1_sq) {
  const ScheduleStep s1 = schedule.at(1);
  const double th1 = theta_at(schedule, 1);
  const double th2 = theta_at(schedule, 2);
  const double denom = 2.0 * (1.0 - th1) * (th2 * s1.gamma + (1.0 - s1.beta) * s1.eta);
  if (!(denom > 0.0)) throw std::domain_error("Phi_1 undefined: effective step at k = 1 <= 0");
  return f1_gap + th1 * th2 / denom * dist1_sq;
}

PlConstants pl_constants(const ConstantSchedule& s, double L, double mu) {
  const double a = s.gamma + s.eta;
  const double b2 = s.beta * s.beta;
  const double eta2 = s.eta * s.eta;
  PlConstants c;
  c.M = a - L * a * a / (1.0 - s.beta) - L * a * a / 2.0;
  const double q = mu * (mu + L) * b2 * eta2 / (1.0 - s.beta);
  const double den = 1.0 - s.beta - mu * c.M + q;
  if (!(den > 0.0)) throw std::domain_error("pl_constants: denominator of C is not positive");
  c.C = (b2 * L * eta2 / 2.0 + c.M * q) / den;
  return c;
}

LyapunovStateVarphi::LyapunovStateVarphi(const ConstantSchedule& s, double L, double mu)
    : constants_(pl_constants(s, L, mu)), beta_(s.beta) {}

double LyapunovStateVarphi::advance(double f_w_gap, double grad_sq) {
  varphi_ = f_w_gap + constants_.C * sum_;
  sum_ = beta_ * sum_ + grad_sq;
  return varphi_;
}

double varphi(std::size_t k, double f_w_gap, std::span<const double> grad_history,
              const ConstantSchedule& s, double L, double mu) {
  if (k == 0) throw std::invalid_argument("varphi is defined for k >= 1");
  if (grad_history.size() + 1 < k) throw std::invalid_argument("varphi: gradient history too short");
  double sum = 0.0;
  for (std::size_t j = 1; j < k; ++j) {
    sum += std::pow(s.beta, static_cast<double>(k - 1 - j)) * grad_history[j - 1];
  }
  return f_w_gap + pl_constants(s, L, mu).C * sum;
}

std::vector<double> bound_series(TheoremId id, const BoundInputs& in, std::size_t T) {
  std::vector<double> out(T);
  if (T == 0) return out;
  switch (id) {
    case TheoremId::kCvxConst:
    case TheoremId::kCvxDeter: {
      const ConstantSchedule& s = need_constant(in, id);
      const double a = s.gamma + s.eta;
      if (!(a > 0.0)) throw std::invalid_argument("convex bound needs gamma + eta > 0");
      double tail = s.beta * in.f1_gap;
      double floor = 0.0;
      if (id == TheoremId::kCvxDeter) {
        tail = s.beta * (in.f1_gap + s.gamma * in.grad1_sq / 2.0);
      } else {
        floor = (3.0 * s.beta * s.gamma / (2.0 * (1.0 - s.beta)) + a / 2.0) * in.sigma * in.sigma;
      }
      for (std::size_t t = 1; t <= T; ++t) {
        const double td = static_cast<double>(t);
        out[t - 1] = in.dist1_sq / (2.0 * a * td) + tail / ((1.0 - s.beta) * td) + floor;
      }
      return out;
    }
    case TheoremId::kAccelDet:
    case TheoremId::kAccelStoch: {
      const Schedule& sched = need_schedule(in, id);
      const double p1 = phi1(sched, in.f1_gap, in.dist1_sq);
      const double s2 = id == TheoremId::kAccelStoch ? in.sigma * in.sigma : 0.0;
      // Theta_{t-1} (Phi_1 + sigma^2 sum_{k<t} (L gamma_k^2 + theta_k gamma~_k) / (2 Theta_k))
      ThetaProduct theta_prev;  // Theta_{t-1}
      double sum = 0.0;
      for (std::size_t t = 1; t <= T; ++t) {
        out[t - 1] = theta_prev.value() * (p1 + s2 * sum);
        if (t == T) break;
        const ScheduleStep st = sched.at(t);
        const double th = theta_at(sched, t);
        theta_prev.times_one_minus(th);
        if (s2 > 0.0) {
          sum += (in.L * st.gamma * st.gamma + th * effective_step(sched, t)) /
                 (2.0 * theta_prev.value());
        }
      }
      return out;
    }
    case TheoremId::kNonconvex: {
      const ConstantSchedule& s = need_constant(in, id);
      const double a = s.gamma + s.eta;
      if (!(a > 0.0)) throw std::invalid_argument("thm-nc needs gamma + eta > 0");
      const double floor =
          (s.beta * s.beta * in.L * s.eta / (1.0 + s.beta) + in.L * a) * in.sigma * in.sigma;
      for (std::size_t t = 1; t <= T; ++t) {
        out[t - 1] = 2.0 * in.f1_gap / (a * static_cast<double>(t)) + floor;
      }
      return out;
    }
    case TheoremId::kPl: {
      const ConstantSchedule& s = need_constant(in, id);
      const double mu = need_mu(in);
      const double a = s.gamma + s.eta;
      const double rate = 1.0 - mu * a / 18.0;
      const double floor = (3.0 * s.beta * s.beta * s.eta / (1.0 + s.beta) + a) * 9.0 * in.L / mu *
                           in.sigma * in.sigma;
      double geo = in.f1_gap;
      for (std::size_t t = 1; t <= T; ++t) {
        geo *= rate;
        out[t - 1] = geo + floor;
      }
      return out;
    }
    case TheoremId::kMomentumVariance:
      break;
  }
  throw std::invalid_argument("lem-m-var has no closed-form RHS; use mbound");
}

double bound_rhs(TheoremId id, const BoundInputs& in, std::size_t t) {
  if (id == TheoremId::kPl && t == 0) {
    const ConstantSchedule& s = need_constant(in, id);
    const double mu = need_mu(in);
    return in.f1_gap + (3.0 * s.beta * s.beta * s.eta / (1.0 + s.beta) + s.gamma + s.eta) * 9.0 *
                           in.L / mu * in.sigma * in.sigma;
  }
  if (t == 0) throw std::invalid_argument("bound horizon must be >= 1");
  return bound_series(id, in, t).back();
}

double accel_det_closed_form(double L, double f1_gap, double dist1_sq, std::size_t t) {
  const double td = static_cast<double>(t);
  return 2.0 * (f1_gap + L * dist1_sq) / (td * (td + 1.0));
}

double accel_stoch_closed_form(double L, double f1_gap, double dist1_sq, std::size_t t,
                               double sigma, double C) {
  if (!(C > 0.0)) throw std::invalid_argument("accel_stoch_closed_form needs C > 0");
  return accel_det_closed_form(L, f1_gap, dist1_sq, t) +
         sigma / std::sqrt(static_cast<double>(t)) * (dist1_sq / C + 11.0 * C / 3.0);
}

double mbound(std::size_t k, std::span<const double> grad_sq_history, double beta, double sigma) {
  if (grad_sq_history.size() < k) throw std::invalid_argument("mbound: gradient history too short");
  double sum = 0.0;
  for (std::size_t j = 1; j <= k; ++j) sum = beta * sum + grad_sq_history[j - 1];
  return 2.0 * (1.0 - beta) * sum + 2.0 * (1.0 - beta) * sigma * sigma / (1.0 + beta);
}

VerificationReport verify_trace(std::span<const std::vector<TraceRow>> runs, TheoremId id,
                                const BoundInputs& in, const VerifyOptions& options) {
  if (runs.empty()) throw std::invalid_argument("verify_trace: no runs");
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& r : runs) n = std::min(n, r.size());

  const auto require = [&](auto member, const char* column) {
    for (const auto& r : runs) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!(r[i].*member)) {
          throw std::invalid_argument(std::string("verify_trace: ") +
                                      std::string(theorem_name(id)) + " needs column " + column);
        }
      }
    }
  };

  // Empirical quantity per run at horizons t = 1..T.
  const std::size_t S = runs.size();
  std::size_t T = id == TheoremId::kPl ? (n > 0 ? n - 1 : 0) : n;
  std::vector<std::vector<double>> emp(S, std::vector<double>(T));
  bool use_xbar = true;
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < n; ++i) use_xbar = use_xbar && r[i].f_xbar.has_value();
  }

  for (std::size_t s = 0; s < S; ++s) {
    const auto& r = runs[s];
    double acc = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
      const TraceRow& row = r[t - 1];
      double e = 0.0;
      switch (id) {
        case TheoremId::kCvxConst:
        case TheoremId::kCvxDeter:
          if (use_xbar) {
            e = *row.f_xbar - in.f_star;
          } else {
            acc += row.f_x - in.f_star;
            e = acc / static_cast<double>(t);
          }
          break;
        case TheoremId::kAccelDet:
        case TheoremId::kAccelStoch:
          if (s == 0 && t == 1) require(&TraceRow::f_y, "f_y");
          e = *row.f_y - in.f_star;
          break;
        case TheoremId::kNonconvex:
          acc += row.grad_sq;
          e = acc / static_cast<double>(t);
          break;
        case TheoremId::kPl:
          if (s == 0 && t == 1) require(&TraceRow::f_w, "f_w");
          e = *r[t].f_w - in.f_star;
          break;
        case TheoremId::kMomentumVariance:
          e = row.m_sq;
          break;
      }
      emp[s][t - 1] = e;
    }
  }

  std::vector<double> rhs;
  if (id == TheoremId::kMomentumVariance) {
    const ConstantSchedule& c = need_constant(in, id);
    rhs.resize(T);
    double sum = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
      double g = 0.0;
      for (std::size_t s = 0; s < S; ++s) g += runs[s][t - 1].grad_sq;
      sum = c.beta * sum + g / static_cast<double>(S);
      rhs[t - 1] = 2.0 * (1.0 - c.beta) * sum +
                   2.0 * (1.0 - c.beta) * in.sigma * in.sigma / (1.0 + c.beta);
    }
  } else {
    rhs = bound_series(id, in, T);
  }

  std::vector<std::size_t> horizons = options.checkpoints;
  if (horizons.empty()) {
    horizons.resize(T);
    for (std::size_t t = 1; t <= T; ++t) horizons[t - 1] = t;
  }

  VerificationReport report;
  report.theorem = id;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t t : horizons) {
    if (t == 0 || t > T) {
      throw std::invalid_argument("verify_trace: horizon " + std::to_string(t) +
                                  " not covered by the traces");
    }
    double mean = 0.0;
    for (std::size_t s = 0; s < S; ++s) mean += emp[s][t - 1];
    mean /= static_cast<double>(S);
    double se = 0.0;
    if (S > 1) {
      double ss = 0.0;
      for (std::size_t s = 0; s < S; ++s) ss += (emp[s][t - 1] - mean) * (emp[s][t - 1] - mean);
      se = std::sqrt(ss / static_cast<double>(S - 1)) / std::sqrt(static_cast<double>(S));
    }
    const double b = rhs[t - 1];
    const double v = mean - b - 2.0 * se;
    const double slack = 1e-12 * std::max(1.0, std::abs(b));
    // NaN means a diverged or broken run; that never passes.
    if (!(v <= slack)) {
      report.pass = false;
      if (!report.first_t) report.first_t = t;
    }
    if (std::isnan(v) || v > report.max_violation) report.max_violation = v;
    report.t.push_back(t);
    report.mean.push_back(mean);
    report.se.push_back(se);
    report.rhs.push_back(b);
  }
  if (report.t.empty()) {
    report.pass = false;
    report.max_violation = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::string format_report(const VerificationReport& report) {
  std::string line = "THEOREM ";
  line += theorem_name(report.theorem);
  line += report.pass ? ": PASS" : ": FAIL";
  line += " max_violation=" + format_real(report.max_violation);
  line += " first_t=" + (report.first_t ? std::to_string(*report.first_t) : std::string("none"));
  return line;
}

}  // namespace gsgdm
