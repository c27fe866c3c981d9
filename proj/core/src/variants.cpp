#include "gsgdm/variants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gsgdm/engine.hpp"

namespace gsgdm {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 8> kNames{{
    {Method::kSgd, "sgd"},
    {Method::kHb, "hb"},
    {Method::kNag, "nag"},
    {Method::kNagClassic, "nag-classic"},
    {Method::kSum, "sum"},
    {Method::kQhm, "qhm"},
    {Method::kMass, "mass"},
    {Method::kGsgdm, "gsgdm"},
}};

void require(bool ok, std::string_view method, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(method) + ": " + what);
}

void require_beta(const NativeParams& p) {
  require(p.beta >= 0.0 && p.beta < 1.0, method_name(p.method), "beta must lie in [0, 1)");
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [key, name] : kNames) {
    if (key == m) return name;
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [key, n] : kNames) {
    if (n == name) return key;
  }
  throw std::invalid_argument("unknown method: " + std::string(name));
}

ConstantSchedule map_to_constant(const NativeParams& p) {
  const std::string_view name = method_name(p.method);
  ConstantSchedule s;
  switch (p.method) {
    case Method::kSgd:
      require(p.gamma >= 0.0, name, "gamma must be nonnegative");
      s = {0.0, p.gamma, 0.0};
      break;
    case Method::kHb:
      require_beta(p);
      require(p.eta != 0.0 && std::isfinite(p.eta), name, "eta must be finite and nonzero");
      s = {p.beta, 0.0, p.eta};
      break;
    case Method::kNag:
      require(p.beta > 0.0 && p.beta < 1.0, name, "beta must lie in (0, 1)");
      require(p.eta > 0.0, name, "eta must be positive");
      s = {p.beta, (1.0 - p.beta) * p.eta / p.beta, p.eta};
      break;
    case Method::kSum:
      require_beta(p);
      require(p.alpha > 0.0, name, "alpha must be positive");
      require(p.s >= 0.0 && p.s <= 1.0 / (1.0 - p.beta), name, "s must lie in [0, 1/(1-beta)]");
      s = {p.beta, p.s * p.alpha, p.alpha / (1.0 - p.beta) - p.s * p.alpha};
      break;
    case Method::kQhm:
      require_beta(p);
      require(p.alpha > 0.0, name, "alpha must be positive");
      require(p.nu >= 0.0 && p.nu <= 1.0, name, "nu must lie in [0, 1]");
      s = {p.beta, p.alpha * (1.0 - p.nu), p.alpha * p.nu};
      break;
    case Method::kMass:
      require_beta(p);
      require(p.alpha > 0.0 && p.lambda > 0.0, name, "alpha and lambda must be positive");
      s = {p.beta, p.alpha, (p.beta * p.alpha - p.lambda) / (1.0 - p.beta)};
      break;
    case Method::kGsgdm:
      s = {p.beta, p.gamma, p.eta};
      break;
    case Method::kNagClassic:
      throw std::invalid_argument("nag-classic has time-varying parameters");
  }
  s.check();
  return s;
}

Schedule map_to_gsgdm(const NativeParams& p, std::size_t horizon) {
  if (p.method == Method::kNagClassic) return nag_classic(p.gamma, horizon);
  return Schedule::constant(map_to_constant(p));
}

VariantState init_variant(const NativeParams& p, const Vec& x1) {
  VariantState st;
  st.method = p.method;
  st.k = 1;
  st.x = x1;
  st.x_prev = x1;
  st.y = x1;
  st.z = x1;
  st.m = Vec::Zero(x1.size());
  return st;
}

void variant_step(VariantState& st, const NativeParams& p, const Vec& g) {
  if (st.method != p.method) throw std::invalid_argument("variant_step: method mismatch");
  if (g.size() != st.x.size()) throw std::invalid_argument("variant_step: dimension mismatch");
  switch (p.method) {
    case Method::kSgd:
      st.x -= p.gamma * g;
      break;
    case Method::kHb: {
      // Constant eta: beta_k eta_k / eta_{k-1} = beta.
      Vec next = st.x + p.beta * (st.x - st.x_prev) - (1.0 - p.beta) * p.eta * g;
      st.x_prev = std::move(st.x);
      st.x = std::move(next);
      break;
    }
    case Method::kNag: {
      const double gamma = (1.0 - p.beta) * p.eta / p.beta;
      Vec y_next = st.x - gamma * g;
      st.x = y_next + p.beta * (y_next - st.y);
      st.y = std::move(y_next);
      break;
    }
    case Method::kNagClassic: {
      const double kd = static_cast<double>(st.k);
      Vec y_next = st.x - p.gamma * g;
      st.x = y_next + (kd - 1.0) / (kd + 2.0) * (y_next - st.y);
      st.y = std::move(y_next);
      break;
    }
    case Method::kSum: {
      Vec y_next = st.x - p.alpha * g;
      Vec z_next = st.x - p.s * p.alpha * g;
      st.x = y_next + p.beta * (z_next - st.z);
      st.z = std::move(z_next);
      break;
    }
    case Method::kQhm:
      st.m = p.beta * st.m + (1.0 - p.beta) * g;
      st.x -= p.alpha * ((1.0 - p.nu) * g + p.nu * st.m);
      break;
    case Method::kMass: {
      Vec y_next = st.x - p.alpha * g;
      st.x = (1.0 + p.beta) * y_next - p.beta * st.y + p.lambda * g;
      st.y = std::move(y_next);
      break;
    }
    case Method::kGsgdm:
      st.m = p.beta * st.m + (1.0 - p.beta) * g;
      st.x -= p.gamma * g + p.eta * st.m;
      break;
  }
  ++st.k;
}

TwinResult twin_run(const ProblemSpec& problem, const NoiseModel& noise, const NativeParams& p,
                    const Vec& x1, std::size_t steps, std::uint64_t stream_seed) {
  const Schedule schedule = map_to_gsgdm(p, steps);
  RngStream stream_g(stream_seed);
  RngStream stream_v(stream_seed);
  RunState g_state = initial_state(x1);
  VariantState v_state = init_variant(p, x1);

  TwinResult out;
  out.max_norm = x1.norm();
  for (std::size_t k = 1; k <= steps; ++k) {
    const Vec gg = sample_gradient(problem, noise, g_state.x, stream_g).g;
    const Vec gv = sample_gradient(problem, noise, v_state.x, stream_v).g;
    gsgdm_step(g_state, schedule.at(k), gg);
    variant_step(v_state, p, gv);
    out.max_deviation = std::max(out.max_deviation, (g_state.x - v_state.x).norm());
    out.max_norm = std::max({out.max_norm, g_state.x.norm(), v_state.x.norm()});
  }
  return out;
}

}  // namespace gsgdm
