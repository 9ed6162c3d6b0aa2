#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include "asg/diagnostics.hpp"
#include "asg/kernels.hpp"
#include "asg/multichain.hpp"
#include "asg/rng.hpp"
#include "asg/support.hpp"

using namespace asg;

TEST(Parallel, AsgChainsMatchSerialReference) {
  const auto k = make_kernel("rosenbrock");
  ChainConfig c;
  c.n_samples = 300;
  c.burn_in = 30;
  c.seed = 17;
  const auto par = run_asg_chains(k, 4, c, true);
  const auto ser = run_asg_chains_serial(k, 4, c);
  ASSERT_EQ(par.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(par[i].samples, ser[i].samples) << i;
    EXPECT_EQ(par[i].log_k_trace, ser[i].log_k_trace) << i;
  }
}

TEST(Parallel, ChainIUsesStreamOffset) {
  const auto k = make_kernel("ackley");
  ChainConfig c;
  c.n_samples = 100;
  c.burn_in = 10;
  c.seed = 5;
  c.stream = 2;
  const auto chains = run_asg_chains(k, 3, c);
  for (std::size_t i = 0; i < 3; ++i) {
    auto ci = c;
    ci.stream = c.stream + i;
    EXPECT_EQ(chains[i].samples, run_asg(k, std::nullopt, ci).samples) << i;
  }
  EXPECT_NE(chains[0].samples, chains[1].samples);
}

TEST(Parallel, RwmhChainsMatchSerial) {
  RwmhConfig c;
  c.chain.n_samples = 500;
  c.chain.seed = 8;
  c.proposal_sd = {0.6};
  const auto k = make_kernel("squiggle");
  const auto a = run_rwmh_chains(k, 3, c, true);
  const auto b = run_rwmh_chains(k, 3, c, false);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i].samples, b[i].samples);
}

TEST(Parallel, EssReportAndAcfMatchSerial) {
  Rng r(3);
  Eigen::MatrixXd m(5000, 6);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double prev = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = prev = 0.1 * static_cast<double>(j) * prev + r.normal();
  }
  const auto a = ess_report(m, 1.0, std::nullopt, true);
  const auto b = ess_report(m, 1.0, std::nullopt, false);
  EXPECT_EQ(a.per_dim_ess, b.per_dim_ess);
  EXPECT_EQ(a.acf, b.acf);
  const std::vector<double> col(m.col(3).data(), m.col(3).data() + m.rows());
  EXPECT_EQ(acf(col, 700, true), acf_serial(col, 700));
}

TEST(Parallel, GridSupportMatchesSerial) {
  const auto k = make_kernel("beta_mixture");
  SupportOptions o;
  o.path = SupportPath::grid_only;
  const auto lg = [&](double x) { return k.log_eval(std::span<const double>(&x, 1)); };
  const auto s = effective_support_1d(lg, o);
  o.parallel_grid = true;
  const auto p = effective_support_1d(lg, o);
  EXPECT_EQ(s.lower, p.lower);
  EXPECT_EQ(s.upper, p.upper);
  EXPECT_EQ(s.norm_const, p.norm_const);
}

TEST(Parallel, DefaultParallelismHonoursEnvironment) {
  ::setenv("ASG_NUM_THREADS", "3", 1);
  EXPECT_EQ(default_parallelism(), 3);
  ::setenv("ASG_NUM_THREADS", "0", 1);
  EXPECT_GE(default_parallelism(), 1);
  ::unsetenv("ASG_NUM_THREADS");
  EXPECT_GE(default_parallelism(), 1);
}
