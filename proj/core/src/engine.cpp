#include "gsgdm/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsgdm {
namespace {

void check_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string("dimension mismatch: ") + what + " has " +
                                std::to_string(b.size()) + " entries, expected " +
                                std::to_string(a.size()));
  }
}

Vec w_of(const Vec& x, const Vec& m_prev, const ConstantSchedule& s) {
  return x - (s.beta * s.eta / (1.0 - s.beta)) * m_prev;
}

Vec v_of(const Vec& x, const Vec& y, double theta) {
  return x + (1.0 / theta - 1.0) * (x - y);
}

}  // namespace

RunState initial_state(const Vec& x1) {
  RunState s;
  s.k = 1;
  s.x = x1;
  s.m_prev = Vec::Zero(x1.size());
  s.g_prev = Vec::Zero(x1.size());
  s.y = x1;
  s.w = x1;
  s.v = x1;
  return s;
}

void gsgdm_step(RunState& state, const ScheduleStep& step, const Vec& g) {
  if (state.k != step.k) {
    throw std::invalid_argument("gsgdm_step: state at k = " + std::to_string(state.k) +
                                " given step for k = " + std::to_string(step.k));
  }
  check_dim(state.x, g, "gradient");
  check_dim(state.x, state.m_prev, "momentum");
  state.m_prev = step.beta * state.m_prev + (1.0 - step.beta) * g;
  state.y = state.x - step.gamma * g;
  state.x = state.y - step.eta * state.m_prev;
  state.g_prev = g;
  ++state.k;
}

void update_w(RunState& state, const ConstantSchedule& s) {
  state.w = state.k == 1 ? state.x : w_of(state.x, state.m_prev, s);
}

Vec w_direct(std::size_t k, const Vec& x, const Vec& x_prev, const Vec& g_prev,
             const ConstantSchedule& s) {
  if (k == 1) return x;
  return (x - s.beta * x_prev + s.beta * s.gamma * g_prev) / (1.0 - s.beta);
}

void update_v_y(RunState& state, const ScheduleStep& step) {
  if (!step.theta) throw std::invalid_argument("update_v_y: schedule step has no theta");
  if (state.k == 1) {
    state.y = state.x;
    state.v = state.x;
    return;
  }
  state.v = v_of(state.x, state.y, *step.theta);
}

Vec v_direct(std::size_t k, const Vec& x, const Vec& x_prev, const Vec& g_prev,
             double gamma_prev, double theta) {
  if (k == 1) return x;
  return (x - (1.0 - theta) * x_prev + (1.0 - theta) * gamma_prev * g_prev) / theta;
}

RunResult run(EngineConfig config) {
  const ProblemSpec& problem = config.problem;
  const Schedule& schedule = config.schedule;
  Trackers track = config.track;
  if (!problem.objective) throw std::invalid_argument("run: problem has no objective");
  check_dim(Vec::Zero(static_cast<Eigen::Index>(problem.dim())), config.x1, "x1");

  if (track.varphi) track.w = true;
  if (track.phi) track.v_y = true;
  if ((track.w || track.varphi) && !schedule.is_constant()) {
    throw std::invalid_argument("run: tracking w needs a constant schedule");
  }
  if (track.v_y && !schedule.has_theta()) {
    throw std::invalid_argument("run: tracking v and y needs a theta-bearing schedule");
  }
  if (track.phi && (!problem.x_star || !problem.f_star)) {
    throw std::invalid_argument("run: Phi needs x* and f*");
  }
  const std::optional<double> mu = config.mu ? config.mu : problem.mu;
  if (track.varphi && (!mu || !problem.f_star)) {
    throw std::invalid_argument("run: varphi needs mu and f*");
  }

  std::optional<ConstantSchedule> cs = schedule.constant_params();
  std::optional<LyapunovStatePhi> phi_state;
  if (track.phi) phi_state.emplace(schedule);
  std::optional<LyapunovStateVarphi> varphi_state;
  if (track.varphi) varphi_state.emplace(*cs, problem.L, *mu);

  std::vector<double> bounds;
  const bool m_bound = config.bound && config.bound->theorem == TheoremId::kMomentumVariance;
  double m_sum = 0.0;
  double m_beta = 0.0;
  double m_floor = 0.0;
  if (config.bound) {
    const BoundSpec& b = *config.bound;
    if (m_bound) {
      if (!b.inputs.constant) throw std::invalid_argument("run: lem-m-var bound needs constant beta");
      m_beta = b.inputs.constant->beta;
      m_floor = 2.0 * (1.0 - m_beta) * b.inputs.sigma * b.inputs.sigma / (1.0 + m_beta);
    } else if (b.theorem == TheoremId::kPl) {
      bounds.push_back(bound_rhs(TheoremId::kPl, b.inputs, 0));
      const auto rest = bound_series(TheoremId::kPl, b.inputs, config.horizon);
      bounds.insert(bounds.end(), rest.begin(), rest.end());
    } else {
      bounds = bound_series(b.theorem, b.inputs, config.horizon);
    }
  }

  RunResult result;
  result.trace.reserve(config.horizon);
  RunState state = initial_state(config.x1);
  Vec x_sum = Vec::Zero(config.x1.size());
  const double f_star = problem.f_star.value_or(0.0);

  for (std::size_t k = 1; k <= config.horizon; ++k) {
    const ScheduleStep step = schedule.at(k);
    TraceRow row;
    row.k = k;
    row.f_x = problem.eval(state.x);
    const Vec grad = problem.grad(state.x);
    row.grad_sq = grad.squaredNorm();
    if (!std::isfinite(row.f_x) || !std::isfinite(row.grad_sq)) {
      result.diverged = true;
      result.diverged_at = k;
      break;
    }

    if (track.w) {
      update_w(state, *cs);
      row.f_w = problem.eval(state.w);
    }
    if (track.v_y) {
      update_v_y(state, step);
      row.f_y = problem.eval(state.y);
    }
    if (track.xbar) {
      x_sum += state.x;
      row.f_xbar = problem.eval(x_sum / static_cast<double>(k));
    }
    if (phi_state) row.phi = phi_state->advance(*row.f_y - f_star, state.v, *problem.x_star);
    if (varphi_state) row.varphi = varphi_state->advance(*row.f_w - f_star, row.grad_sq);

    const GradientSample sample = sample_gradient(problem, config.noise, state.x, config.stream);
    const Vec& g = sample.g;
    if (config.stop_at_fixed_point && g.isZero(0.0)) {
      const Vec m = step.beta * state.m_prev;
      if ((step.eta * m).isZero(0.0)) break;
    }

    const Vec w_k = state.w;
    const Vec v_k = state.v;
    gsgdm_step(state, step, g);
    row.m_sq = state.m_prev.squaredNorm();

    if (track.residuals && track.w) {
      const Vec w_next = w_of(state.x, state.m_prev, *cs);
      row.resid_w = (w_next - w_k + (cs->gamma + cs->eta) * g).norm() / (1.0 + w_k.norm());
    }
    if (track.residuals && track.v_y) {
      const double theta_next = *schedule.at(k + 1).theta;
      const Vec v_next = v_of(state.x, state.y, theta_next);
      row.resid_v =
          (v_next - v_k + effective_step(step, theta_next) * g).norm() / (1.0 + v_k.norm());
    }
    if (m_bound) {
      m_sum = m_beta * m_sum + row.grad_sq;
      row.bound = 2.0 * (1.0 - m_beta) * m_sum + m_floor;
    } else if (!bounds.empty()) {
      row.bound = bounds[k - 1];
    }

    result.trace.push_back(row);
    if (!state.x.allFinite() || !std::isfinite(row.m_sq)) {
      result.diverged = true;
      result.diverged_at = k + 1;
      break;
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace gsgdm
