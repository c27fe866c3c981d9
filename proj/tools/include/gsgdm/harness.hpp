#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsgdm/analysis.hpp"
#include "gsgdm/problems.hpp"
#include "gsgdm/variants.hpp"

namespace gsgdm {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A number, or a multiple of 1/L written "c/L" (just "1/L" for c = 1).
struct Scalar {
  double value = 0.0;
  bool per_L = false;
  double resolve(double L) const { return per_L ? value / L : value; }
};

struct ProblemDescriptor {
  enum class Kind { kQuadratic, kPlSine, kLogisticFile, kLogisticSynth };
  Kind kind = Kind::kQuadratic;
  std::vector<double> lambdas;
  std::string file;
  std::size_t n = 0;
  std::size_t d = 0;
  std::string text;
};

/// quad:1,4 | plsine | logistic:file=PATH | logistic:synth=N,D
ProblemDescriptor parse_problem(std::string_view text);

struct ScheduleDescriptor {
  enum class Kind { kConst, kAccel, kNagClassic };
  Kind kind = Kind::kConst;
  std::map<std::string, Scalar, std::less<>> values;
  bool gamma_auto = false;
  std::string text;
};

/// const:beta=..,gamma=..,eta=.. (plus alpha, s, nu, lambda for the native
/// methods) | accel:gamma=auto|1/L|NUM,beta1=..,C=.. | nag-classic:gamma=..
ScheduleDescriptor parse_schedule(std::string_view text);

struct ExperimentPlan {
  ProblemDescriptor problem;
  Method method = Method::kGsgdm;
  ScheduleDescriptor schedule;
  double sigma = 0.0;
  std::optional<std::size_t> batch;  // absent: full gradient
  std::size_t iters = 1000;
  std::size_t seeds = 1;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
  std::vector<TheoremId> checks;
  std::optional<double> C;
  std::optional<std::vector<double>> x1;
  std::size_t fstar_iters = 1000000;
};

/// Native parameters for the plan's method with c/L values resolved.
/// Throws UsageError when the schedule does not fit the method.
NativeParams native_params(const ExperimentPlan& plan, double L);

/// Thrown by parse_args for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

/// Throws UsageError on unknown flags, malformed descriptors and
/// incompatible method/schedule pairs.
ExperimentPlan parse_args(int argc, const char* const* argv);

/// Minimum of f over a deterministic accelerated run (gamma = 1/L).
double reference_fstar(const ProblemSpec& problem, std::size_t iters);

/// Builds the problem, runs every seed, writes <method>_<r>.csv and
/// <method>_mean.csv into out_dir, prints one report line per check.
int run_experiment(const ExperimentPlan& plan, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsgdm
