#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gsgdm/analysis.hpp"
#include "gsgdm/problems.hpp"
#include "gsgdm/rng.hpp"
#include "gsgdm/schedules.hpp"
#include "gsgdm/types.hpp"

namespace gsgdm {

/// k = 1, m_0 = 0, g_0 = 0 and w = v = y = x_1.
RunState initial_state(const Vec& x1);

/// m_k = beta_k m_{k-1} + (1 - beta_k) g_k, x_{k+1} = x_k - gamma_k g_k - eta_k m_k.
/// Also advances y to x_k - gamma_k g_k. Throws std::invalid_argument on a
/// dimension or index mismatch.
void gsgdm_step(RunState& state, const ScheduleStep& step, const Vec& g);

/// w_k = x_k - beta eta / (1 - beta) m_{k-1}, stored into state.w.
void update_w(RunState& state, const ConstantSchedule& s);

/// w_k = (x_k - beta x_{k-1} + beta gamma g_{k-1}) / (1 - beta), x_1 at k = 1.
Vec w_direct(std::size_t k, const Vec& x, const Vec& x_prev, const Vec& g_prev,
             const ConstantSchedule& s);

/// v_k = x_k + (1/theta_k - 1)(x_k - y_k), stored into state.v. Throws
/// std::invalid_argument when the step has no theta.
void update_v_y(RunState& state, const ScheduleStep& step);

/// v_k = (x_k - (1 - theta_k) x_{k-1} + (1 - theta_k) gamma_{k-1} g_{k-1}) / theta_k, x_1 at k = 1.
Vec v_direct(std::size_t k, const Vec& x, const Vec& x_prev, const Vec& g_prev,
             double gamma_prev, double theta);

struct Trackers {
  bool w = false;          // f_w, needs a constant schedule
  bool v_y = false;        // f_y, needs theta
  bool phi = false;        // needs v_y and x*
  bool varphi = false;     // needs w, mu and a constant schedule
  bool residuals = false;  // resid_w / resid_v for whichever of w, v is tracked
  bool xbar = false;       // f at the running average of the iterates
};

struct BoundSpec {
  TheoremId theorem = TheoremId::kCvxConst;
  BoundInputs inputs;
};

struct EngineConfig {
  Schedule schedule;
  ProblemSpec problem;
  NoiseModel noise;
  std::size_t horizon = 0;
  RngStream stream;
  Vec x1;
  Trackers track;
  std::optional<double> mu;  // varphi; defaults to problem.mu
  /// Stop before recording a row whose gradient and previous momentum are both zero.
  bool stop_at_fixed_point = false;
  /// Fills the bound column with the theorem RHS aligned to each row.
  std::optional<BoundSpec> bound;
};

struct RunResult {
  std::vector<TraceRow> trace;
  RunState final_state;
  bool diverged = false;
  std::optional<std::size_t> diverged_at;
};

/// Runs `horizon` steps. Row k holds values at x_k (and w_k, y_k, v_k), m_k
/// after the step, and the residual of the k -> k+1 auxiliary update
/// normalized by 1 + |w_k| (or |v_k|). A non-finite value stops the run with
/// the rows so far kept and `diverged` set.
RunResult run(EngineConfig config);

}  // namespace gsgdm
