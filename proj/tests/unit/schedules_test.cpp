#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gsgdm/analysis.hpp"
#include "gsgdm/schedules.hpp"

using gsgdm::ConstantSchedule;
using gsgdm::Schedule;
using gsgdm::ScheduleStep;

namespace {

// Literal "NAG-varying" parameters: beta_k = (k-1)/(k+2), eta constant, theta_k = 2/(k+2).
Schedule literal_nag(double gamma, double eta, std::size_t n) {
  std::vector<ScheduleStep> steps;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    steps.push_back({k, (kd - 1) / (kd + 2), gamma, eta, 2 / (kd + 2)});
  }
  return Schedule::sequence(steps);
}

}  // namespace

TEST(ConstantSchedule, Check) {
  EXPECT_NO_THROW((ConstantSchedule{0.9, 0.0, -0.5}.check()));
  EXPECT_THROW((ConstantSchedule{1.0, 0.1, 0.1}.check()), std::invalid_argument);
  EXPECT_THROW((ConstantSchedule{0.5, -0.1, 0.1}.check()), std::invalid_argument);
  EXPECT_THROW((ConstantSchedule{0.5, 0.1, NAN}.check()), std::invalid_argument);
}

TEST(Schedule, ConstantAndTable) {
  auto c = Schedule::constant({0.5, 0.1, 0.2});
  EXPECT_TRUE(c.is_constant());
  EXPECT_EQ(c.at(1000).beta, 0.5);
  EXPECT_EQ(c.at(7).k, 7u);
  EXPECT_FALSE(c.has_theta());

  auto t = Schedule::sequence({{1, 0.1, 0.2, 0.3, 0.5}, {2, 0.1, 0.2, 0.3, 0.4}});
  EXPECT_EQ(t.length(), 2u);
  EXPECT_TRUE(t.has_theta());
  EXPECT_THROW(t.at(3), std::out_of_range);
  EXPECT_THROW(Schedule::sequence({{2, 0, 0, 0, {}}}), std::invalid_argument);
}

TEST(Accelerated, RationalOracleLUnit) {
  const auto a = gsgdm::build_accelerated(1.0, 1.0, 0.9, 10);
  const double eta[] = {0.0, 1.0 / 5, 13.0 / 30, 71.0 / 105, 155.0 / 168, 295.0 / 252};
  const double beta[] = {0.9, 0.0, 3.0 / 13, 26.0 / 71, 71.0 / 155, 31.0 / 59};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(a.eta[i], eta[i], 1e-15) << "k=" << i + 1;
    EXPECT_NEAR(a.beta[i], beta[i], 1e-15) << "k=" << i + 1;
  }
  EXPECT_DOUBLE_EQ(a.theta[0], 2.0 / 3);
  EXPECT_DOUBLE_EQ(a.theta[1], 0.5);
  EXPECT_EQ(a.eta.size(), 12u);
}

TEST(Accelerated, RationalOracleLFour) {
  const auto a = gsgdm::build_accelerated(4.0, 0.25, 0.9, 4);
  const double eta[] = {0.0, 1.0 / 20, 13.0 / 120, 71.0 / 420};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a.eta[i], eta[i], 1e-16);
  const auto s = a.schedule();
  for (std::size_t k = 1; k <= 4; ++k) {
    EXPECT_NEAR(gsgdm::effective_step(s, k), (k + 1) / 8.0, 1e-15);
  }
}

TEST(Accelerated, EffectiveStepIdentity) {
  for (double L : {1.0, 4.0, 0.3}) {
    for (double frac : {1.0, 0.5, 0.9}) {
      const double gamma = frac / L;
      const std::size_t n = 10000;
      const auto a = gsgdm::build_accelerated(L, gamma, 0.9, n);
      const auto s = a.schedule();
      for (std::size_t k = 1; k <= n; ++k) {
        const double target = (k + 1) * L * gamma * gamma / 2;
        const double tol = 1e-12 + gsgdm::representation_error(a.beta[k - 1], a.beta[k]);
        ASSERT_NEAR(gsgdm::effective_step(s, k), target, tol * target) << "L=" << L << " k=" << k;
      }
    }
  }
}

TEST(Accelerated, StepOneOverLKeepsBetaInRange) {
  const std::size_t n = 1000000;
  const auto a = gsgdm::build_accelerated(2.0, 0.5, 0.9, n);
  EXPECT_TRUE(a.beta_out_of_range.empty());
  for (std::size_t k = 2; k <= n; ++k) {
    ASSERT_GT(a.eta[k - 1], 0.0);
    ASSERT_GE(a.beta[k - 1], 0.0);
    ASSERT_LT(a.beta[k - 1], 1.0);
  }
}

TEST(Accelerated, SmallGammaFlagsBeta) {
  const auto a = gsgdm::build_accelerated(1.0, 0.1, 0.5, 50);
  EXPECT_LT(a.eta[0], 0.0);
  EXPECT_FALSE(a.beta_out_of_range.empty());
}

TEST(Accelerated, Errors) {
  EXPECT_THROW(gsgdm::build_accelerated(1.0, 1.5, 0.9, 10), std::invalid_argument);
  EXPECT_THROW(gsgdm::build_accelerated(1.0, 0.0, 0.9, 10), std::invalid_argument);
  EXPECT_THROW(gsgdm::build_accelerated(1.0, std::nullopt, 0.9, 10), std::invalid_argument);
  EXPECT_THROW(gsgdm::build_accelerated(1.0, 1.0, 1.0, 10), std::invalid_argument);
  // L = 1, gamma = 19/32, beta_1 = 0 lands exactly on eta_3 = 0 in double arithmetic.
  try {
    gsgdm::build_accelerated(1.0, 19.0 / 32.0, 0.0, 10);
    FAIL() << "expected eta_3 = 0 to be rejected";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("eta_3"), std::string::npos);
  }
}

TEST(Accelerated, AutoGamma) {
  EXPECT_DOUBLE_EQ(gsgdm::accelerated_gamma(1.0, 1, 1.0, 1.0), 1.0);
  const double g = gsgdm::accelerated_gamma(1.0, 10000, 1.0, 1.0);
  EXPECT_NEAR(g, std::pow(10000.0, -0.75), 1e-15);
  const auto a = gsgdm::build_accelerated(1.0, std::nullopt, 0.9, 10000, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a.gamma, g);
}

TEST(ValidateConvex, WorkedExamples) {
  auto det = gsgdm::validate_convex_constant({0.9, 1.0, 1.0}, 1.0, true);
  EXPECT_TRUE(det.pass);
  EXPECT_NEAR(det.condition("eta-max").worst, 8.0, 1e-12);

  auto sto = gsgdm::validate_convex_constant({0.0, 0.5, 0.6}, 1.0, false);
  EXPECT_FALSE(sto.pass);
  EXPECT_NEAR(sto.condition("step-max").worst, -0.1, 1e-12);

  EXPECT_TRUE(gsgdm::validate_convex_constant({0.0, 0.0, 1.0}, 1.0, true).pass);
  EXPECT_TRUE(gsgdm::validate_convex_constant({0.0, 0.0, 1.0}, 1.0, false).pass);
}

TEST(ValidateConvex, StrictStepPositivity) {
  auto r = gsgdm::validate_convex_constant({0.5, 0.2, -0.2}, 1.0, false);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.condition("step-pos").holds());
  EXPECT_FALSE(gsgdm::validate_convex_constant({0.5, 0.2, -0.2}, 1.0, true).pass);
}

TEST(ValidateNonconvex, WorkedExamples) {
  EXPECT_TRUE(gsgdm::validate_nonconvex({0.9, 0.0, 0.03}, 1.0, false).pass);
  EXPECT_FALSE(gsgdm::validate_nonconvex({0.9, 0.0, 0.04}, 1.0, false).pass);

  auto pl = gsgdm::validate_nonconvex({0.5, 0.01, 0.01}, 1.0, true);
  EXPECT_TRUE(pl.pass);
  EXPECT_NEAR(pl.condition("step-max").worst, 0.25 - 0.02, 1e-15);

  auto boundary = gsgdm::validate_nonconvex({0.0, 0.25, 0.25}, 1.0, true);
  EXPECT_TRUE(boundary.pass);
  EXPECT_EQ(boundary.condition("step-max").worst, 0.0);

  EXPECT_FALSE(gsgdm::validate_nonconvex({0.5, 0.1, 0.0}, 1.0, false).pass);
}

TEST(ValidateTimeVarying, AcceleratedUnitStepHoldsWithEquality) {
  const std::size_t n = 200;
  const auto a = gsgdm::build_accelerated(1.0, 1.0, 0.9, n);
  const auto r = gsgdm::validate_timevarying(a.schedule(), 1.0, n);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.first_failing_k.has_value());
  const auto& lr2 = r.condition("lr-2");
  for (double v : lr2.per_k) EXPECT_NEAR(v, 0.0, 1e-13);
  const auto& lr1 = r.condition("lr-1");
  for (std::size_t k = 1; k < n; ++k) {
    EXPECT_NEAR(lr1.per_k[k - 1], 1.0 - (k + 1.0) / (k + 2.0), 1e-13) << k;
  }
  for (double v : r.condition("cond-beta").per_k) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ValidateTimeVarying, AcceleratedLongHorizon) {
  for (double L : {1.0, 4.0, 3.0}) {
    const std::size_t n = 100000;
    const auto a = gsgdm::build_accelerated(L, 1.0 / L, 0.9, n);
    EXPECT_TRUE(gsgdm::validate_timevarying(a.schedule(), L, n).pass) << L;
  }
}

TEST(ValidateTimeVarying, LiteralNagViolatesCoupling) {
  const std::size_t n = 6;
  const auto r = gsgdm::validate_timevarying(literal_nag(0.1, 0.1, n + 1), 1.0, n);
  const auto& c = r.condition("cond-beta");
  EXPECT_EQ(c.per_k[0], 0.0);
  for (std::size_t k = 2; k < n; ++k) {
    EXPECT_NEAR(c.per_k[k - 1], -3.0 / ((k + 2.0) * (k + 3.0)), 1e-15) << k;
  }
  EXPECT_FALSE(c.holds());
  EXPECT_EQ(c.worst_k, 2u);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failing_k, 1u);
}

TEST(ValidateTimeVarying, RejectsBadTheta) {
  auto no_theta = Schedule::sequence({{1, 0, 1, 0, {}}, {2, 0, 1, 0, {}}, {3, 0, 1, 0, {}}});
  EXPECT_THROW(gsgdm::validate_timevarying(no_theta, 1.0, 2), std::invalid_argument);
  auto bad = Schedule::sequence({{1, 0, 1, 0, 1.0}, {2, 0, 1, 0, 0.5}, {3, 0, 1, 0, 0.4}});
  EXPECT_THROW(gsgdm::validate_timevarying(bad, 1.0, 2), std::invalid_argument);
}

TEST(NagClassic, EmbeddingMatchesMomentum) {
  const double gamma = 0.05;
  const auto s = gsgdm::nag_classic(gamma, 50);
  EXPECT_EQ(s.at(1).beta, 0.0);
  EXPECT_EQ(s.at(1).eta, 0.0);
  for (std::size_t k = 2; k <= 50; ++k) {
    const auto cur = s.at(k);
    const auto prev = s.at(k - 1);
    EXPECT_EQ(cur.gamma, gamma);
    if (prev.eta > 0) {
      EXPECT_NEAR(cur.beta * cur.eta / prev.eta, (k - 1.0) / (k + 2.0), 1e-14);
      EXPECT_NEAR((1 - cur.beta) * prev.eta / cur.beta, gamma, 1e-15);
    }
  }
}
