#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gsgdm/harness.hpp"
#include "gsgdm/trace.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"gsgdm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gsgdm::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gsgdm_harness_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(ParseProblem, Descriptors) {
  auto q = gsgdm::parse_problem("quad:1,4");
  EXPECT_EQ(q.kind, gsgdm::ProblemDescriptor::Kind::kQuadratic);
  EXPECT_EQ(q.lambdas, (std::vector<double>{1.0, 4.0}));
  EXPECT_EQ(gsgdm::parse_problem("plsine").kind, gsgdm::ProblemDescriptor::Kind::kPlSine);
  auto s = gsgdm::parse_problem("logistic:synth=200,5");
  EXPECT_EQ(s.n, 200u);
  EXPECT_EQ(s.d, 5u);
  EXPECT_EQ(gsgdm::parse_problem("logistic:file=a.csv").file, "a.csv");
  EXPECT_THROW(gsgdm::parse_problem("quad:"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_problem("quad:1,-2"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_problem("rosenbrock"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_problem("logistic:synth=5"), gsgdm::UsageError);
}

TEST(ParseSchedule, ValuesAndPerL) {
  auto c = gsgdm::parse_schedule("const:beta=0.9,gamma=0,eta=0.5/L");
  EXPECT_EQ(c.kind, gsgdm::ScheduleDescriptor::Kind::kConst);
  EXPECT_DOUBLE_EQ(c.values.at("beta").value, 0.9);
  EXPECT_TRUE(c.values.at("eta").per_L);
  EXPECT_DOUBLE_EQ(c.values.at("eta").resolve(4.0), 0.125);
  auto a = gsgdm::parse_schedule("accel:gamma=auto,C=2");
  EXPECT_TRUE(a.gamma_auto);
  EXPECT_TRUE(gsgdm::parse_schedule("accel:gamma=1/L").values.at("gamma").per_L);
  EXPECT_THROW(gsgdm::parse_schedule("const:beta=auto"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_schedule("const:beta=0.1,beta=0.2"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_schedule("const:beta"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_schedule("cosine:gamma=1"), gsgdm::UsageError);
  EXPECT_THROW(gsgdm::parse_schedule("nag-classic:"), gsgdm::UsageError);
}

TEST(ParseArgs, MethodScheduleCompatibility) {
  const char* ok[] = {"gsgdm", "--problem", "quad:1,4", "--method", "hb",
                      "--schedule", "const:beta=0.9,eta=0.1"};
  const auto plan = gsgdm::parse_args(7, ok);
  EXPECT_EQ(plan.method, gsgdm::Method::kHb);
  EXPECT_EQ(plan.iters, 1000u);
  EXPECT_EQ(plan.seed, 42u);
  const auto p = gsgdm::native_params(plan, 4.0);
  EXPECT_DOUBLE_EQ(p.beta, 0.9);
  EXPECT_DOUBLE_EQ(p.eta, 0.1);

  const char* accel_hb[] = {"gsgdm", "--problem", "quad:1", "--method", "hb", "--schedule",
                            "accel:gamma=1/L"};
  EXPECT_THROW(gsgdm::parse_args(7, accel_hb), gsgdm::UsageError);
  const char* both_noise[] = {"gsgdm", "--problem", "logistic:synth=50,3", "--schedule",
                              "const:gamma=0.1", "--method", "sgd", "--sigma", "0.1",
                              "--batch", "4"};
  EXPECT_THROW(gsgdm::parse_args(11, both_noise), gsgdm::UsageError);
  const char* quad_batch[] = {"gsgdm", "--problem", "quad:1", "--schedule", "const:gamma=0.1",
                              "--method", "sgd", "--batch", "4"};
  EXPECT_THROW(gsgdm::parse_args(9, quad_batch), gsgdm::UsageError);
  const char* bad_check[] = {"gsgdm", "--problem", "quad:1", "--schedule", "const:gamma=0.1",
                             "--method", "sgd", "--check", "thm-zzz"};
  EXPECT_THROW(gsgdm::parse_args(9, bad_check), gsgdm::UsageError);
}

TEST(Cli, AcceleratedRunWritesTracesAndPasses) {
  const auto dir = scratch("accel");
  const auto r = cli({"--problem", "quad:1,4", "--schedule", "accel:gamma=1/L", "--iters", "300",
                      "--check", "thm-accel-det", "--out", dir.string()});
  EXPECT_EQ(r.code, gsgdm::kExitPass) << r.err;
  EXPECT_EQ(r.out.rfind("THEOREM thm-accel-det: PASS", 0), 0u) << r.out;
  std::ifstream in(dir / "gsgdm_0.csv");
  const auto rows = gsgdm::read_trace_csv(in);
  ASSERT_EQ(rows.size(), 300u);
  EXPECT_TRUE(rows[0].f_y.has_value());
  EXPECT_TRUE(rows[0].phi.has_value());
  EXPECT_TRUE(rows[0].bound.has_value());
  EXPECT_TRUE(fs::exists(dir / "gsgdm_mean.csv"));
  fs::remove_all(dir);
}

TEST(Cli, StochasticSeedsAreReproducible) {
  const auto dir = scratch("seeds");
  const std::vector<std::string> args{"--problem", "quad:1,2,3", "--method", "qhm", "--schedule",
                                      "const:alpha=0.1,beta=0.9,nu=0.7", "--sigma", "0.2",
                                      "--seeds", "3", "--iters", "50", "--out", dir.string()};
  ASSERT_EQ(cli(args).code, gsgdm::kExitPass);
  std::ifstream a(dir / "qhm_2.csv");
  std::stringstream first;
  first << a.rdbuf();
  ASSERT_EQ(cli(args).code, gsgdm::kExitPass);
  std::ifstream b(dir / "qhm_2.csv");
  std::stringstream second;
  second << b.rdbuf();
  EXPECT_EQ(first.str(), second.str());
  std::ifstream c(dir / "qhm_0.csv");
  std::stringstream zero;
  zero << c.rdbuf();
  EXPECT_NE(first.str(), zero.str());
  fs::remove_all(dir);
}

TEST(Cli, FailingCheckExitsOne) {
  const auto dir = scratch("fail");
  // eta outside the nonconvex range: the bound is not guaranteed and fails here.
  const auto r = cli({"--problem", "plsine", "--method", "hb", "--schedule", "const:beta=0.9,eta=1",
                      "--iters", "200", "--x1", "3", "--check", "thm-nc", "--out", dir.string()});
  EXPECT_EQ(r.code, gsgdm::kExitCheckFailed) << r.out << r.err;
  EXPECT_NE(r.err.find("preconditions do not hold"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, DivergenceExitsTwo) {
  const auto dir = scratch("diverge");
  const auto r = cli({"--problem", "quad:1", "--method", "sgd", "--schedule", "const:gamma=3",
                      "--iters", "5000", "--out", dir.string()});
  EXPECT_EQ(r.code, gsgdm::kExitDiverged);
  EXPECT_NE(r.err.find("diverged"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, UsageErrorsExitThree) {
  EXPECT_EQ(cli({"--problem", "quad:1"}).code, gsgdm::kExitUsage);
  EXPECT_EQ(cli({"--problem", "quad:1", "--schedule", "accel:gamma=auto"}).code,
            gsgdm::kExitUsage);
  EXPECT_EQ(cli({"--problem", "quad:1", "--method", "nag", "--schedule", "const:beta=0,eta=1"}).code,
            gsgdm::kExitUsage);
  EXPECT_EQ(cli({"--problem", "plsine", "--method", "hb", "--schedule", "const:beta=0.5,eta=0.01",
                 "--check", "thm-cvx-const"})
                .code,
            gsgdm::kExitUsage);
  EXPECT_EQ(cli({"--problem", "quad:1", "--method", "hb", "--schedule", "const:beta=0.5,eta=0.1",
                 "--sigma", "0.1", "--check", "thm-cvx-deter"})
                .code,
            gsgdm::kExitUsage);
  EXPECT_EQ(cli({"--problem", "quad:1,2", "--schedule", "const:gamma=0.1", "--method", "sgd",
                 "--x1", "1"})
                .code,
            gsgdm::kExitUsage);
}

TEST(Cli, Help) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, gsgdm::kExitPass);
  EXPECT_NE(r.out.find("--schedule"), std::string::npos);
}

TEST(Cli, LogisticCachesFstar) {
  const auto dir = scratch("logistic");
  const auto r = cli({"--problem", "logistic:synth=100,4", "--method", "hb", "--schedule",
                      "const:beta=0.5,eta=0.1/L", "--sigma", "0.1", "--iters", "100",
                      "--fstar-iters", "2000", "--check", "thm-nc", "--out", dir.string()});
  EXPECT_EQ(r.code, gsgdm::kExitPass) << r.out << r.err;
  EXPECT_NE(r.err.find("computing f*"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "fstar.txt"));
  const auto again = cli({"--problem", "logistic:synth=100,4", "--method", "hb", "--schedule",
                          "const:beta=0.5,eta=0.1/L", "--sigma", "0.1", "--iters", "100",
                          "--fstar-iters", "2000", "--check", "thm-nc", "--out",
                          dir.string()});
  EXPECT_EQ(again.err.find("computing f*"), std::string::npos);
  EXPECT_EQ(again.out, r.out);

  const auto batch = cli({"--problem", "logistic:synth=100,4", "--method", "sgd", "--schedule",
                          "const:gamma=0.5/L", "--batch", "10", "--iters", "20", "--check",
                          "thm-nc", "--out", dir.string()});
  EXPECT_EQ(batch.code, gsgdm::kExitUsage);
  fs::remove_all(dir);
}
