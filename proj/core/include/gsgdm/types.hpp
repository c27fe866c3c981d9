#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Core>

namespace gsgdm {

using Vec = Eigen::VectorXd;

/// Parameters applied at iteration k. theta is present only for the
/// time-varying accelerated family.
struct ScheduleStep {
  std::size_t k = 1;
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  std::optional<double> theta;
};

/// Iterate x_k plus the quantities carried between steps.
///
/// `m_prev` is m_{k-1} (zero at k = 1) and `g_prev` is g_{k-1}. `y` holds
/// y_k = x_{k-1} - gamma_{k-1} g_{k-1} (x_1 at k = 1); the stepper keeps it
/// current. `w` and `v` are filled by the engine when those trackers are on.
struct RunState {
  std::size_t k = 1;
  Vec x;
  Vec m_prev;
  Vec g_prev;
  Vec y;
  Vec w;
  Vec v;
};

/// One iteration of a run. Columns that were not tracked stay empty.
struct TraceRow {
  std::size_t k = 0;
  double f_x = 0.0;
  std::optional<double> f_w;
  std::optional<double> f_y;
  double grad_sq = 0.0;
  double m_sq = 0.0;
  std::optional<double> phi;
  std::optional<double> varphi;
  std::optional<double> bound;
  std::optional<double> resid_w;
  std::optional<double> resid_v;
  // f at the running average of x_1..x_k. Kept in memory only; the CSV schema
  // does not carry it.
  std::optional<double> f_xbar;
};

}  // namespace gsgdm
