#include <unistd.h>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "asg/error.hpp"
#include "asg/io.hpp"
#include "asg/kernels.hpp"
#include "asg/rng.hpp"
#include "asg/runner.hpp"

using namespace asg;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("asg_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = r.normal() * std::pow(10.0, r.uniform(-300, 300));
    ASSERT_EQ(std::stod(io::format_double(v)), v) << io::format_double(v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(std::stod(io::format_double(std::numeric_limits<double>::min())), std::numeric_limits<double>::min());
}

TEST(Io, MatrixCsvRoundTrip) {
  Eigen::MatrixXd m(50, 3);
  Rng r(2);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.normal() * 1e3;
  const auto dir = scratch_dir("csv");
  const auto text = io::matrix_csv(m);
  EXPECT_EQ(text.substr(0, text.find('\n')), "x1,x2,x3");
  io::write_file_atomic(dir / "m.csv", text);
  EXPECT_EQ(io::read_matrix_csv(dir / "m.csv"), m);
  fs::remove_all(dir);
}

TEST(Io, ColumnsCsvChecksLengths) {
  EXPECT_EQ(io::columns_csv({"a", "b"}, {{1, 2}, {3, 4}}), "a,b\n1,3\n2,4\n");
  EXPECT_ANY_THROW(io::columns_csv({"a", "b"}, {{1, 2}, {3}}));
}

TEST(Io, AtomicWriteReplacesAndFailsCleanly) {
  const auto dir = scratch_dir("atomic");
  io::write_file_atomic(dir / "f.txt", "first");
  io::write_file_atomic(dir / "f.txt", "second");
  EXPECT_EQ(slurp(dir / "f.txt"), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(io::write_file_atomic(dir / "missing" / "f.txt", "x"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Io, ChainConfigJsonRoundTrip) {
  ChainConfig c;
  c.n_samples = 123;
  c.burn_in = 7;
  c.thin = 3;
  c.epsilon = 0.025;
  c.s0 = 1.7;
  c.seed = 99;
  c.stream = 4;
  c.scan = ScanOrder::random_permutation;
  c.max_rejections = 500;
  c.fallback_range = {-3.5, 8.25};
  c.reuse_bracket_if_unchanged = true;
  c.extend_to_slice = false;
  c.time_limit_seconds = 2.5;
  const auto back = io::chain_config_from_json(io::to_json(c));
  EXPECT_EQ(io::to_json(back), io::to_json(c));
  EXPECT_EQ(back.scan, ScanOrder::random_permutation);
  EXPECT_FALSE(back.extend_to_slice);
  // Older manifests without the newer keys keep the defaults.
  auto j = io::to_json(ChainConfig{});
  j.erase("extend_to_slice");
  j.erase("reuse_bracket_if_unchanged");
  EXPECT_TRUE(io::chain_config_from_json(j).extend_to_slice);
  EXPECT_FALSE(io::chain_config_from_json(j).reuse_bracket_if_unchanged);
}

TEST(Io, ManifestJsonRoundTrip) {
  io::RunManifest m;
  m.kernel = "lasso_bridge";
  m.params = {{"lambda", 0.1}, {"alpha", 1.0}};
  m.sampler = "rwmh";
  m.chain.n_samples = 10;
  m.proposal_sd = {0.5, 0.25};
  m.x0 = std::vector<double>{0.1, 0.2};
  m.data.kind = "synthetic";
  m.data.synthetic.n_obs = 40;
  m.data.synthetic.seed = 5;
  m.output_dir = "out";
  m.timestamp = io::utc_timestamp();
  m.library_version = "x";
  const auto j = io::to_json(m);
  const auto back = io::manifest_from_json(j);
  EXPECT_EQ(io::to_json(back), j);
  EXPECT_EQ(back.x0, m.x0);
  EXPECT_EQ(back.data.synthetic.n_obs, 40u);
  EXPECT_EQ(m.timestamp.size(), 20u);
  EXPECT_EQ(m.timestamp.back(), 'Z');
}

TEST(Io, LoadDataSyntheticIsReproducible) {
  io::DataSource d;
  EXPECT_FALSE(io::load_data(d).has_value());
  d.kind = "synthetic";
  d.synthetic.n_obs = 30;
  d.synthetic.n_pred = 4;
  d.synthetic.sparsity = 2;
  const auto a = io::load_data(d), b = io::load_data(d);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->design, b->design);
  EXPECT_EQ(a->response, b->response);
  EXPECT_EQ(a->n_pred(), 4u);
}

TEST(Io, RegressionCsvNeedsResponse) {
  const auto dir = scratch_dir("reg");
  io::write_file_atomic(dir / "ok.csv", "a,y,b\n1,2,3\n2,1,5\n4,0,1\n");
  const auto d = load_regression_csv(dir / "ok.csv");
  EXPECT_EQ(d.n_pred(), 2u);
  EXPECT_EQ(d.response, Eigen::Vector3d(2, 1, 0));
  EXPECT_EQ(d.predictor_names, (std::vector<std::string>{"a", "b"}));
  io::write_file_atomic(dir / "bad.csv", "a,b\n1,2\n3,4\n");
  EXPECT_ANY_THROW(load_regression_csv(dir / "bad.csv"));
  fs::remove_all(dir);
}

TEST(Io, RunArtifactsAreComplete) {
  io::RunManifest m;
  m.kernel = "rosenbrock";
  m.chain.n_samples = 200;
  m.chain.burn_in = 20;
  m.chain.seed = 3;
  const auto res = run_manifest(m);
  const auto dir = scratch_dir("artifacts");
  write_run_artifacts(dir, m, res);
  for (const char* f :
       {"samples.csv", "logk_trace.csv", "acf.csv", "running_mean.csv", "ess_report.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(io::read_matrix_csv(dir / "samples.csv"), res.output.samples);
  const auto rep = io::json::parse(slurp(dir / "ess_report.json"));
  EXPECT_EQ(rep.at("min_ess").get<double>(), res.report.min_ess);
  const auto again = io::manifest_from_json(io::json::parse(slurp(dir / "manifest.json")));
  EXPECT_EQ(run_manifest(again).output.samples, res.output.samples);
  fs::remove_all(dir);
}
