#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "gsgdm/rng.hpp"

using gsgdm::RngStream;

TEST(RngStream, MatchesReferenceWords) {
  RngStream s0(0);
  EXPECT_EQ(s0.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(s0.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(s0.next(), 0x06c45d188009454fULL);

  EXPECT_EQ(RngStream(1).next(), 0x910a2dec89025cc1ULL);
  EXPECT_EQ(RngStream(2).next(), 0x975835de1c9756ceULL);
}

TEST(RngStream, SameSeedSameSequence) {
  RngStream a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(RngStream, UniformInUnitInterval) {
  RngStream s(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(BoxMuller, KnownPoints) {
  const auto [a0, a1] = gsgdm::box_muller(1.0, 0.0);
  EXPECT_EQ(a0, 0.0);
  EXPECT_EQ(a1, 0.0);
  const auto [b0, b1] = gsgdm::box_muller(std::exp(-2.0), 0.0);
  EXPECT_NEAR(b0, 2.0, 1e-15);
  EXPECT_EQ(b1, 0.0);
}

TEST(RngStream, GaussianPairConsumesTwoWords) {
  RngStream a(99), b(99);
  a.gaussian_pair();
  b.next();
  b.next();
  EXPECT_EQ(a.state(), b.state());
}

TEST(RngStream, GaussianMoments) {
  RngStream s(2024);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n / 2; ++i) {
    const auto [z1, z2] = s.gaussian_pair();
    sum += z1 + z2;
    sq += z1 * z1 + z2 * z2;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_GT(mean, -0.01);
  EXPECT_LT(mean, 0.01);
  EXPECT_GT(var, 0.99);
  EXPECT_LT(var, 1.01);
}

TEST(RngStream, FillGaussianOddLengthDiscardsLastPartner) {
  RngStream a(5), b(5);
  Eigen::VectorXd v(3);
  a.fill_gaussian(v, 2.0);
  const auto [p0, p1] = b.gaussian_pair();
  const auto [q0, q1] = b.gaussian_pair();
  (void)q1;
  EXPECT_EQ(v[0], 2.0 * p0);
  EXPECT_EQ(v[1], 2.0 * p1);
  EXPECT_EQ(v[2], 2.0 * q0);
  EXPECT_EQ(a.state(), b.state());
}

TEST(RngStream, DeriveSeparatesRuns) {
  EXPECT_EQ(RngStream::derive(42, 3).state(), RngStream::derive(42, 3).state());
  EXPECT_NE(RngStream::derive(42, 1).state(), RngStream::derive(42, 2).state());
  RngStream direct(42 ^ 3);
  EXPECT_EQ(RngStream::derive(42, 3).state(), direct.next());
}

TEST(RngStream, IndexInRange) {
  RngStream s(11);
  for (int i = 0; i < 10000; ++i) ASSERT_LT(s.index(7), 7u);
}
