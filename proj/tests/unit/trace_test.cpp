#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gsgdm/trace.hpp"

using gsgdm::TraceRow;

namespace {

TraceRow row(std::size_t k, double f) {
  TraceRow r;
  r.k = k;
  r.f_x = f;
  r.grad_sq = 2 * f;
  r.m_sq = f / 3;
  return r;
}

}  // namespace

TEST(Trace, HeaderIsExact) {
  std::ostringstream out;
  gsgdm::write_trace_csv(out, std::vector<TraceRow>{});
  EXPECT_EQ(out.str(), "k,f_x,f_w,f_y,grad_sq,m_sq,phi,varphi,bound,resid_w,resid_v\n");
}

TEST(Trace, MissingOptionalsAreEmptyFields) {
  std::ostringstream out;
  TraceRow r = row(1, 0.5);
  r.f_w = 0.25;
  gsgdm::write_trace_csv(out, std::vector<TraceRow>{r});
  const std::string text = out.str();
  const std::string line = text.substr(text.find('\n') + 1);
  EXPECT_EQ(line, "1,0.5,0.25,,1,0.16666666666666666,,,,,\n");
}

TEST(Trace, RoundTripIsExact) {
  std::vector<TraceRow> rows;
  for (std::size_t k = 1; k <= 20; ++k) {
    TraceRow r = row(k, 1.0 / static_cast<double>(k * k + 3));
    if (k % 2) r.phi = 3.14159 / static_cast<double>(k);
    r.resid_v = 1e-17 * static_cast<double>(k);
    rows.push_back(r);
  }
  std::stringstream io;
  gsgdm::write_trace_csv(io, rows);
  const auto back = gsgdm::read_trace_csv(io);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].k, rows[i].k);
    EXPECT_EQ(back[i].f_x, rows[i].f_x);
    EXPECT_EQ(back[i].m_sq, rows[i].m_sq);
    EXPECT_EQ(back[i].phi, rows[i].phi);
    EXPECT_EQ(back[i].resid_v, rows[i].resid_v);
    EXPECT_FALSE(back[i].f_w.has_value());
  }
}

TEST(Trace, RejectsWrongHeader) {
  std::istringstream in("k,f_x\n1,2\n");
  EXPECT_THROW(gsgdm::read_trace_csv(in), std::runtime_error);
}

TEST(Trace, RejectsWrongFieldCount) {
  std::istringstream in("k,f_x,f_w,f_y,grad_sq,m_sq,phi,varphi,bound,resid_w,resid_v\n1,2,3\n");
  EXPECT_THROW(gsgdm::read_trace_csv(in), std::runtime_error);
}

TEST(Trace, MeanTruncatesAndDropsPartialColumns) {
  std::vector<std::vector<TraceRow>> runs(2);
  for (std::size_t k = 1; k <= 3; ++k) runs[0].push_back(row(k, 1.0));
  for (std::size_t k = 1; k <= 2; ++k) runs[1].push_back(row(k, 3.0));
  runs[0][0].f_w = 1.0;
  runs[1][0].f_w = 5.0;
  runs[0][1].phi = 1.0;

  const auto mean = gsgdm::mean_trace(runs);
  ASSERT_EQ(mean.size(), 2u);
  EXPECT_DOUBLE_EQ(mean[0].f_x, 2.0);
  EXPECT_DOUBLE_EQ(mean[1].grad_sq, 4.0);
  EXPECT_EQ(mean[0].f_w, 3.0);
  EXPECT_FALSE(mean[1].phi.has_value());
}
