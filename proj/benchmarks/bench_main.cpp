#include <benchmark/benchmark.h>

#include "gsgdm/engine.hpp"
#include "gsgdm/problems.hpp"
#include "gsgdm/schedules.hpp"

namespace {

std::vector<double> spectrum(std::size_t d) {
  std::vector<double> l(d);
  for (std::size_t i = 0; i < d; ++i) l[i] = 1.0 + static_cast<double>(i) / static_cast<double>(d);
  return l;
}

void BM_Step(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  auto st = gsgdm::initial_state(gsgdm::Vec::Ones(d));
  const gsgdm::Vec g = gsgdm::Vec::Constant(d, 1e-3);
  std::size_t k = 1;
  for (auto _ : state) {
    gsgdm::gsgdm_step(st, {k++, 0.9, 0.01, 0.1, {}}, g);
    benchmark::DoNotOptimize(st.x.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Arg(10)->Arg(1000)->Arg(100000);

void BM_SampleGradient(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto problem = gsgdm::quadratic(spectrum(d));
  const gsgdm::NoiseModel noise{gsgdm::NoiseKind::kGaussianAdditive, 0.1, 0};
  gsgdm::RngStream stream(1);
  const gsgdm::Vec x = gsgdm::Vec::Ones(static_cast<Eigen::Index>(d));
  for (auto _ : state) {
    auto s = gsgdm::sample_gradient(problem, noise, x, stream);
    benchmark::DoNotOptimize(s.g.data());
  }
}
BENCHMARK(BM_SampleGradient)->Arg(10)->Arg(1000);

void BM_MinibatchLogistic(benchmark::State& state) {
  gsgdm::RngStream data_stream(3);
  auto data = gsgdm::synthetic_logistic(2000, 20, data_stream, 0.05);
  const auto problem = gsgdm::logistic(std::move(data.features), std::move(data.labels));
  const gsgdm::NoiseModel noise{gsgdm::NoiseKind::kMinibatch, 0.0,
                                static_cast<std::size_t>(state.range(0))};
  gsgdm::RngStream stream(1);
  const gsgdm::Vec x = gsgdm::Vec::Zero(20);
  for (auto _ : state) {
    auto s = gsgdm::sample_gradient(problem, noise, x, stream);
    benchmark::DoNotOptimize(s.g.data());
  }
}
BENCHMARK(BM_MinibatchLogistic)->Arg(1)->Arg(64);

void BM_RunAccelerated(benchmark::State& state) {
  const auto horizon = static_cast<std::size_t>(state.range(0));
  const auto schedule = gsgdm::build_accelerated(2.0, 0.5, 0.9, horizon).schedule();
  for (auto _ : state) {
    gsgdm::EngineConfig c;
    c.schedule = schedule;
    c.problem = gsgdm::quadratic(spectrum(10));
    c.horizon = horizon;
    c.x1 = gsgdm::Vec::Ones(10);
    c.track.phi = true;
    c.track.residuals = true;
    auto r = gsgdm::run(std::move(c));
    benchmark::DoNotOptimize(r.trace.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(horizon));
}
BENCHMARK(BM_RunAccelerated)->Arg(10000);

void BM_BuildAccelerated(benchmark::State& state) {
  const auto horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto a = gsgdm::build_accelerated(1.0, 1.0, 0.9, horizon);
    benchmark::DoNotOptimize(a.eta.data());
  }
}
BENCHMARK(BM_BuildAccelerated)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
