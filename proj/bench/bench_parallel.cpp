// Serial reference vs OpenMP paths. Results are identical by construction
// (see test_parallel); this only measures the wall-clock difference.

#include <benchmark/benchmark.h>

#include "asg/diagnostics.hpp"
#include "asg/kernels.hpp"
#include "asg/multichain.hpp"
#include "asg/rng.hpp"
#include "asg/support.hpp"

namespace {

std::vector<double> ar1(std::size_t n) {
  asg::Rng r(1);
  std::vector<double> x(n);
  double prev = 0;
  for (auto& v : x) prev = v = 0.9 * prev + r.normal();
  return x;
}

Eigen::MatrixXd ar1_matrix(Eigen::Index n, Eigen::Index m) {
  asg::Rng r(2);
  Eigen::MatrixXd x(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double prev = 0;
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = prev = 0.9 * prev + r.normal();
  }
  return x;
}

void BM_AcfSerial(benchmark::State& st) {
  const auto x = ar1(static_cast<std::size_t>(st.range(0)));
  const auto lag = asg::default_max_lag(x.size());
  for (auto _ : st) benchmark::DoNotOptimize(asg::acf_serial(x, lag));
}

void BM_AcfParallel(benchmark::State& st) {
  const auto x = ar1(static_cast<std::size_t>(st.range(0)));
  const auto lag = asg::default_max_lag(x.size());
  for (auto _ : st) benchmark::DoNotOptimize(asg::acf(x, lag, true));
}

void BM_EssReport(benchmark::State& st) {
  const auto x = ar1_matrix(20000, 20);
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(asg::ess_report(x, 1.0, std::nullopt, parallel));
}

void BM_GridSupport(benchmark::State& st) {
  const auto k = asg::make_kernel("beta_mixture");
  asg::SupportOptions o;
  o.path = asg::SupportPath::grid_only;
  o.parallel_grid = st.range(0) != 0;
  const auto lg = [&](double x) { return k.log_eval(std::span<const double>(&x, 1)); };
  for (auto _ : st) benchmark::DoNotOptimize(asg::effective_support_1d(lg, o));
}

void BM_Chains(benchmark::State& st) {
  const auto k = asg::make_kernel("rosenbrock");
  asg::ChainConfig c;
  c.n_samples = 200;
  c.burn_in = 20;
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(parallel ? asg::run_asg_chains(k, 8, c, true) : asg::run_asg_chains_serial(k, 8, c));
  }
}

}  // namespace

BENCHMARK(BM_AcfSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AcfParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EssReport)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSupport)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Chains)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
