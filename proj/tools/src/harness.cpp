#include "gsgdm/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "gsgdm/engine.hpp"
#include "gsgdm/schedules.hpp"
#include "gsgdm/trace.hpp"

namespace gsgdm {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view text, std::string_view what) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError("malformed number '" + std::string(text) + "' in " + std::string(what));
  }
  return value;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value == 0) {
    throw UsageError("expected a positive integer, got '" + std::string(text) + "' in " +
                     std::string(what));
  }
  return value;
}

Scalar parse_scalar(std::string_view text, std::string_view what) {
  if (text.size() >= 2 && text.substr(text.size() - 2) == "/L") {
    return Scalar{parse_number(text.substr(0, text.size() - 2), what), true};
  }
  return Scalar{parse_number(text, what), false};
}

std::optional<double> lookup(const ScheduleDescriptor& s, std::string_view key, double L) {
  const auto it = s.values.find(key);
  if (it == s.values.end()) return std::nullopt;
  return it->second.resolve(L);
}

double required(const ScheduleDescriptor& s, std::string_view key, double L, Method m) {
  const auto v = lookup(s, key, L);
  if (!v) {
    throw UsageError("method " + std::string(method_name(m)) + " needs " + std::string(key) +
                     " in the schedule");
  }
  return *v;
}

void only_keys(const ScheduleDescriptor& s, std::initializer_list<std::string_view> keys,
               std::string_view owner) {
  for (const auto& [key, value] : s.values) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) {
      throw UsageError("schedule key '" + key + "' is not used by " + std::string(owner));
    }
  }
}

ProblemSpec build_problem(const ProblemDescriptor& d, std::uint64_t seed) {
  switch (d.kind) {
    case ProblemDescriptor::Kind::kQuadratic:
      return quadratic(d.lambdas);
    case ProblemDescriptor::Kind::kPlSine:
      return pl_sine();
    case ProblemDescriptor::Kind::kLogisticFile: {
      std::ifstream in(d.file);
      if (!in) throw UsageError("cannot open dataset " + d.file);
      LogisticData data = read_logistic_dataset(in);
      return logistic(std::move(data.features), std::move(data.labels));
    }
    case ProblemDescriptor::Kind::kLogisticSynth: {
      RngStream stream = RngStream::derive(seed, ~std::uint64_t{0});
      LogisticData data = synthetic_logistic(d.n, d.d, stream);
      return logistic(std::move(data.features), std::move(data.labels));
    }
  }
  throw UsageError("unknown problem kind");
}

// f* is cached next to the traces; the key guards against reusing a value
// computed for a different instance.
double cached_fstar(const ExperimentPlan& plan, const ProblemSpec& problem, std::ostream& err) {
  std::ostringstream key;
  key << "problem=" << plan.problem.text << " seed=" << plan.seed
      << " iters=" << plan.fstar_iters;
  const auto path = plan.out_dir / "fstar.txt";
  {
    std::ifstream in(path);
    std::string line;
    if (in && std::getline(in, line) && line == key.str() && std::getline(in, line)) {
      return parse_number(line, path.string());
    }
  }
  err << "computing f* with " << plan.fstar_iters << " accelerated iterations\n";
  const double f_star = reference_fstar(problem, plan.fstar_iters);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << key.str() << '\n' << format_real(f_star) << '\n';
  return f_star;
}

struct CheckSetup {
  TheoremId id;
  BoundInputs inputs;
};

}  // namespace

ProblemDescriptor parse_problem(std::string_view text) {
  ProblemDescriptor d;
  d.text = std::string(text);
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (head == "plsine") {
    if (!rest.empty()) throw UsageError("plsine takes no arguments");
    d.kind = ProblemDescriptor::Kind::kPlSine;
  } else if (head == "quad") {
    d.kind = ProblemDescriptor::Kind::kQuadratic;
    if (rest.empty()) throw UsageError("quad needs eigenvalues, e.g. quad:1,4");
    for (auto part : split(rest, ',')) {
      const double v = parse_number(part, "quad");
      if (!(v > 0.0)) throw UsageError("quad eigenvalues must be positive");
      d.lambdas.push_back(v);
    }
  } else if (head == "logistic") {
    if (rest.starts_with("file=")) {
      d.kind = ProblemDescriptor::Kind::kLogisticFile;
      d.file = std::string(rest.substr(5));
      if (d.file.empty()) throw UsageError("logistic:file= needs a path");
    } else if (rest.starts_with("synth=")) {
      d.kind = ProblemDescriptor::Kind::kLogisticSynth;
      const auto parts = split(rest.substr(6), ',');
      if (parts.size() != 2) throw UsageError("logistic:synth=N,D expects two sizes");
      d.n = parse_count(parts[0], "logistic:synth");
      d.d = parse_count(parts[1], "logistic:synth");
    } else {
      throw UsageError("logistic needs file=PATH or synth=N,D");
    }
  } else {
    throw UsageError("unknown problem '" + std::string(head) + "'");
  }
  return d;
}

ScheduleDescriptor parse_schedule(std::string_view text) {
  ScheduleDescriptor s;
  s.text = std::string(text);
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (head == "const") {
    s.kind = ScheduleDescriptor::Kind::kConst;
  } else if (head == "accel") {
    s.kind = ScheduleDescriptor::Kind::kAccel;
  } else if (head == "nag-classic") {
    s.kind = ScheduleDescriptor::Kind::kNagClassic;
  } else {
    throw UsageError("unknown schedule '" + std::string(head) + "'");
  }
  if (!rest.empty()) {
    for (auto item : split(rest, ',')) {
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw UsageError("schedule entries are key=value, got '" + std::string(item) + "'");
      }
      const std::string key(item.substr(0, eq));
      const std::string_view value = item.substr(eq + 1);
      if (s.values.count(key) || (key == "gamma" && s.gamma_auto)) {
        throw UsageError("duplicate schedule key '" + key + "'");
      }
      if (value == "auto") {
        if (s.kind != ScheduleDescriptor::Kind::kAccel || key != "gamma") {
          throw UsageError("only accel:gamma accepts 'auto'");
        }
        s.gamma_auto = true;
        continue;
      }
      s.values.emplace(key, parse_scalar(value, s.text));
    }
  }
  switch (s.kind) {
    case ScheduleDescriptor::Kind::kConst:
      only_keys(s, {"beta", "gamma", "eta", "alpha", "s", "nu", "lambda"}, "const schedules");
      break;
    case ScheduleDescriptor::Kind::kAccel:
      only_keys(s, {"gamma", "beta1", "C"}, "accel schedules");
      break;
    case ScheduleDescriptor::Kind::kNagClassic:
      only_keys(s, {"gamma"}, "nag-classic schedules");
      if (!s.values.count("gamma")) throw UsageError("nag-classic needs gamma");
      break;
  }
  return s;
}

NativeParams native_params(const ExperimentPlan& plan, double L) {
  const ScheduleDescriptor& s = plan.schedule;
  const Method m = plan.method;
  NativeParams p;
  p.method = m;
  const std::string owner = "method " + std::string(method_name(m));
  if (m == Method::kNagClassic) {
    if (s.kind != ScheduleDescriptor::Kind::kNagClassic) {
      throw UsageError("method nag-classic needs a nag-classic schedule");
    }
    p.gamma = required(s, "gamma", L, m);
    if (!(p.gamma > 0.0)) throw UsageError("nag-classic needs gamma > 0");
    return p;
  }
  if (s.kind != ScheduleDescriptor::Kind::kConst) {
    throw UsageError(owner + " needs a const schedule");
  }
  switch (m) {
    case Method::kSgd: {
      only_keys(s, {"beta", "gamma", "eta"}, owner);
      if (lookup(s, "beta", L).value_or(0.0) != 0.0) throw UsageError("sgd has beta = 0");
      const auto g = lookup(s, "gamma", L);
      const auto e = lookup(s, "eta", L);
      if (!g && !e) throw UsageError("sgd needs gamma (step size)");
      p.gamma = g.value_or(0.0) + e.value_or(0.0);
      break;
    }
    case Method::kHb:
      only_keys(s, {"beta", "gamma", "eta"}, owner);
      if (lookup(s, "gamma", L).value_or(0.0) != 0.0) throw UsageError("hb has gamma = 0");
      p.beta = required(s, "beta", L, m);
      p.eta = required(s, "eta", L, m);
      break;
    case Method::kNag: {
      only_keys(s, {"beta", "gamma", "eta"}, owner);
      p.beta = required(s, "beta", L, m);
      if (!(p.beta > 0.0)) throw UsageError("nag needs beta > 0 (gamma = (1-beta) eta / beta)");
      const auto g = lookup(s, "gamma", L);
      const auto e = lookup(s, "eta", L);
      if (e) {
        p.eta = *e;
        if (g) {
          const double implied = (1.0 - p.beta) * p.eta / p.beta;
          if (std::abs(*g - implied) > 1e-12 * std::max(1.0, std::abs(implied))) {
            throw UsageError("nag: gamma must equal (1-beta) eta / beta");
          }
        }
      } else if (g) {
        p.eta = p.beta * *g / (1.0 - p.beta);
      } else {
        throw UsageError("nag needs eta or gamma");
      }
      break;
    }
    case Method::kSum:
      only_keys(s, {"alpha", "beta", "s"}, owner);
      p.alpha = required(s, "alpha", L, m);
      p.beta = required(s, "beta", L, m);
      p.s = required(s, "s", L, m);
      break;
    case Method::kQhm:
      only_keys(s, {"alpha", "beta", "nu"}, owner);
      p.alpha = required(s, "alpha", L, m);
      p.beta = required(s, "beta", L, m);
      p.nu = required(s, "nu", L, m);
      break;
    case Method::kMass:
      only_keys(s, {"alpha", "beta", "lambda"}, owner);
      p.alpha = required(s, "alpha", L, m);
      p.beta = required(s, "beta", L, m);
      p.lambda = required(s, "lambda", L, m);
      break;
    case Method::kGsgdm:
      only_keys(s, {"beta", "gamma", "eta"}, owner);
      p.beta = lookup(s, "beta", L).value_or(0.0);
      p.gamma = lookup(s, "gamma", L).value_or(0.0);
      p.eta = lookup(s, "eta", L).value_or(0.0);
      break;
    case Method::kNagClassic:
      break;
  }
  try {
    map_to_constant(p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

ExperimentPlan parse_args(int argc, const char* const* argv) {
  ExperimentPlan plan;
  CLI::App app{"Run G-SGDM and its special cases, write traces, check convergence bounds."};
  app.name("gsgdm");
  std::string problem;
  std::string method;
  std::string schedule;
  std::string out_dir = ".";
  std::string x1;
  std::size_t batch = 0;
  double C = 0.0;
  std::vector<std::string> checks;
  app.add_option("--problem", problem, "quad:1,4 | plsine | logistic:file=PATH | logistic:synth=N,D")
      ->required();
  app.add_option("--method", method, "sgd | hb | nag | nag-classic | sum | qhm | mass | gsgdm");
  app.add_option("--schedule", schedule,
                 "const:beta=..,gamma=..,eta=.. | accel:gamma=auto|1/L|NUM,beta1=..,C=.. | "
                 "nag-classic:gamma=..")
      ->required();
  app.add_option("--sigma", plan.sigma, "Gaussian gradient noise, E|g - grad f|^2 = sigma^2")
      ->check(CLI::NonNegativeNumber);
  auto* batch_opt = app.add_option("--batch", batch, "minibatch size (default: full gradient)")
                        ->check(CLI::PositiveNumber);
  app.add_option("--iters", plan.iters, "iterations per run")->check(CLI::PositiveNumber);
  app.add_option("--seeds", plan.seeds, "number of runs")->check(CLI::PositiveNumber);
  app.add_option("--seed", plan.seed, "experiment seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--check", checks,
                 "thm-cvx-const | thm-cvx-deter | thm-accel-det | thm-accel-stoch | thm-nc | "
                 "thm-pl | lem-m-var");
  auto* c_opt = app.add_option("--C", C, "constant C of the tuned accelerated step")
                    ->check(CLI::PositiveNumber);
  app.add_option("--x1", x1, "initial point as comma-separated values (default: N(0, I))");
  app.add_option("--fstar-iters", plan.fstar_iters, "iterations of the logistic f* reference run")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  plan.problem = parse_problem(problem);
  plan.schedule = parse_schedule(schedule);
  plan.out_dir = out_dir;
  if (*batch_opt) plan.batch = batch;
  if (plan.batch && plan.sigma > 0.0) {
    throw UsageError("--sigma and --batch select different noise models; give one");
  }
  if (plan.batch && (plan.problem.kind == ProblemDescriptor::Kind::kQuadratic ||
                     plan.problem.kind == ProblemDescriptor::Kind::kPlSine)) {
    throw UsageError("--batch needs a finite-sum (logistic) problem");
  }

  const auto accel_C = plan.schedule.values.find("C");
  if (accel_C != plan.schedule.values.end()) plan.C = accel_C->second.value;
  if (*c_opt) plan.C = C;

  if (method.empty()) {
    plan.method = plan.schedule.kind == ScheduleDescriptor::Kind::kNagClassic ? Method::kNagClassic
                                                                               : Method::kGsgdm;
  } else {
    try {
      plan.method = parse_method(method);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  switch (plan.schedule.kind) {
    case ScheduleDescriptor::Kind::kAccel:
      if (plan.method != Method::kGsgdm) {
        throw UsageError("accel schedules run with --method gsgdm");
      }
      if (plan.schedule.gamma_auto && (!(plan.sigma > 0.0) || !plan.C || !(*plan.C > 0.0))) {
        throw UsageError("accel:gamma=auto needs --sigma > 0 and C > 0");
      }
      if (const auto b = plan.schedule.values.find("beta1");
          b != plan.schedule.values.end() && !(b->second.value >= 0.0 && b->second.value < 1.0)) {
        throw UsageError("accel: beta1 must lie in [0, 1)");
      }
      break;
    case ScheduleDescriptor::Kind::kNagClassic:
      if (plan.method != Method::kNagClassic && plan.method != Method::kGsgdm) {
        throw UsageError("nag-classic schedules run with --method nag-classic or gsgdm");
      }
      if (plan.method == Method::kGsgdm) plan.method = Method::kNagClassic;
      native_params(plan, 1.0);
      break;
    case ScheduleDescriptor::Kind::kConst:
      // Ranges do not depend on L (c/L keeps its sign), so validate with L = 1.
      native_params(plan, 1.0);
      break;
  }

  for (const auto& c : checks) {
    try {
      plan.checks.push_back(parse_theorem(c));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (!x1.empty()) {
    std::vector<double> values;
    for (auto part : split(x1, ',')) values.push_back(parse_number(part, "--x1"));
    plan.x1 = std::move(values);
  }
  return plan;
}

double reference_fstar(const ProblemSpec& problem, std::size_t iters) {
  const Schedule schedule = build_accelerated(problem.L, 1.0 / problem.L, 0.9, iters).schedule();
  RunState state = initial_state(Vec::Zero(static_cast<Eigen::Index>(problem.dim())));
  double best = problem.eval(state.x);
  for (std::size_t k = 1; k <= iters; ++k) {
    gsgdm_step(state, schedule.at(k), problem.grad(state.x));
    const double f = problem.eval(state.x);
    if (std::isfinite(f)) best = std::min(best, f);
  }
  return best;
}

int run_experiment(const ExperimentPlan& plan, std::ostream& out, std::ostream& err) {
  ProblemSpec problem = build_problem(plan.problem, plan.seed);
  const double L = problem.L;

  std::error_code ec;
  std::filesystem::create_directories(plan.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + plan.out_dir.string() + ": " + ec.message());

  // Schedule.
  Schedule schedule;
  std::optional<ConstantSchedule> constant;
  if (plan.schedule.kind == ScheduleDescriptor::Kind::kAccel) {
    std::optional<double> gamma;
    if (!plan.schedule.gamma_auto) gamma = lookup(plan.schedule, "gamma", L).value_or(1.0 / L);
    const double beta1 = lookup(plan.schedule, "beta1", L).value_or(0.9);
    try {
      const AcceleratedSchedule acc = build_accelerated(
          L, gamma, beta1, plan.iters, plan.sigma, plan.C ? plan.C : std::optional<double>{});
      if (!acc.beta_out_of_range.empty()) {
        err << "note: beta_k leaves [0, 1) at " << acc.beta_out_of_range.size()
            << " iterations, first k = " << acc.beta_out_of_range.front() << '\n';
      }
      schedule = acc.schedule();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
  } else {
    const NativeParams p = native_params(plan, L);
    schedule = map_to_gsgdm(p, plan.iters);
    constant = schedule.constant_params();
  }

  // Initial point shared by every run.
  Vec x1(static_cast<Eigen::Index>(problem.dim()));
  if (plan.x1) {
    if (plan.x1->size() != problem.dim()) {
      throw UsageError("--x1 has " + std::to_string(plan.x1->size()) + " values, problem has " +
                       std::to_string(problem.dim()) + " dimensions");
    }
    for (std::size_t i = 0; i < plan.x1->size(); ++i) x1[static_cast<Eigen::Index>(i)] = (*plan.x1)[i];
  } else {
    RngStream init = RngStream::derive(plan.seed, 0);
    init.fill_gaussian(x1);
  }

  NoiseModel noise;
  if (plan.batch) {
    noise.kind = NoiseKind::kMinibatch;
    noise.batch = *plan.batch;
  } else {
    noise.sigma = plan.sigma;
  }
  const bool exact = plan.batch ? *plan.batch >= problem.objective->sample_count()
                                : plan.sigma == 0.0;

  // Checks: applicability first so usage errors come before the f* reference run.
  for (TheoremId id : plan.checks) {
    const std::string name(theorem_name(id));
    const bool time_varying = id == TheoremId::kAccelDet || id == TheoremId::kAccelStoch;
    if (time_varying && !schedule.has_theta()) {
      throw UsageError(name + " needs an accel schedule");
    }
    if (!time_varying && !constant) throw UsageError(name + " needs a const schedule");
    const bool needs_convex = id == TheoremId::kCvxConst || id == TheoremId::kCvxDeter ||
                              time_varying;
    if (needs_convex && (!problem.convex || !problem.x_star)) {
      throw UsageError(name + " needs a convex problem with a known minimizer");
    }
    if ((id == TheoremId::kCvxDeter || id == TheoremId::kAccelDet) && !exact) {
      throw UsageError(name + " assumes exact gradients (sigma = 0, full batch)");
    }
    if (plan.batch && !exact) {
      throw UsageError(name + " needs a known sigma; minibatch noise has none");
    }
    if (id == TheoremId::kPl && !problem.mu) throw UsageError("thm-pl needs a PL constant");
  }
  if (!problem.f_star && !plan.checks.empty()) problem.f_star = cached_fstar(plan, problem, err);

  // Bound inputs and advisory precondition reports.
  const double f_star = problem.f_star.value_or(0.0);
  std::vector<CheckSetup> setups;
  for (TheoremId id : plan.checks) {
    const std::string name(theorem_name(id));
    const bool time_varying = id == TheoremId::kAccelDet || id == TheoremId::kAccelStoch;
    CheckSetup c{id, {}};
    c.inputs.L = L;
    c.inputs.mu = problem.mu;
    c.inputs.sigma = exact ? 0.0 : plan.sigma;
    c.inputs.f_star = f_star;
    c.inputs.constant = constant;
    if (time_varying) c.inputs.schedule = schedule;
    c.inputs.f1_gap = problem.eval(x1) - f_star;
    c.inputs.grad1_sq = problem.grad(x1).squaredNorm();
    if (problem.x_star) c.inputs.dist1_sq = (x1 - *problem.x_star).squaredNorm();

    std::optional<ValidationReport> v;
    switch (id) {
      case TheoremId::kCvxConst: v = validate_convex_constant(*constant, L, false); break;
      case TheoremId::kCvxDeter: v = validate_convex_constant(*constant, L, true); break;
      case TheoremId::kAccelDet:
      case TheoremId::kAccelStoch: v = validate_timevarying(schedule, L, plan.iters); break;
      case TheoremId::kNonconvex: v = validate_nonconvex(*constant, L, false); break;
      case TheoremId::kPl: v = validate_nonconvex(*constant, L, true); break;
      case TheoremId::kMomentumVariance: break;
    }
    if (v && !v->pass) {
      err << "note: " << name << " preconditions do not hold:";
      for (const auto& cond : v->conditions) {
        if (!cond.holds()) err << ' ' << cond.name << '=' << format_real(cond.worst);
      }
      err << '\n';
    }
    setups.push_back(std::move(c));
  }

  EngineConfig config;
  config.schedule = schedule;
  config.problem = problem;
  config.noise = noise;
  config.horizon = plan.iters;
  config.x1 = x1;
  config.track.residuals = true;
  if (constant) {
    config.track.w = true;
    config.track.xbar = true;
    config.track.varphi = problem.mu && problem.f_star && *problem.mu > 0.0 && constant->eta > 0.0;
    if (config.track.varphi) {
      try {
        pl_constants(*constant, L, *problem.mu);
      } catch (const std::domain_error&) {
        config.track.varphi = false;
      }
    }
  } else if (schedule.has_theta()) {
    config.track.v_y = true;
    config.track.phi = problem.x_star && problem.f_star;
  }
  if (!setups.empty()) config.bound = BoundSpec{setups.front().id, setups.front().inputs};

  const std::string method(method_name(plan.method));
  std::vector<std::vector<TraceRow>> runs;
  runs.reserve(plan.seeds);
  bool diverged = false;
  for (std::size_t r = 0; r < plan.seeds; ++r) {
    config.stream = RngStream::derive(plan.seed, r + 1);
    RunResult result = run(config);
    if (result.diverged) {
      diverged = true;
      err << method << " run " << r << " diverged at k = " << *result.diverged_at << '\n';
    }
    const auto path = plan.out_dir / (method + "_" + std::to_string(r) + ".csv");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    write_trace_csv(file, result.trace);
    runs.push_back(std::move(result.trace));
  }
  {
    const auto path = plan.out_dir / (method + "_mean.csv");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    write_trace_csv(file, mean_trace(runs));
  }

  bool all_pass = true;
  for (const auto& c : setups) {
    const VerificationReport report = verify_trace(runs, c.id, c.inputs);
    out << format_report(report) << '\n';
    all_pass = all_pass && report.pass;
  }
  if (diverged) return kExitDiverged;
  return all_pass ? kExitPass : kExitCheckFailed;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentPlan plan = parse_args(argc, argv);
    return run_experiment(plan, out, err);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitPass;
  } catch (const UsageError& e) {
    err << "gsgdm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gsgdm: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace gsgdm
