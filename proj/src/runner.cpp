#include "asg/runner.hpp"

#include <cmath>

#include "asg/error.hpp"
#include "asg/rwmh.hpp"

namespace asg {

RunResult run_manifest(const io::RunManifest& m) {
  const auto data = io::load_data(m.data);
  const LogKernel kernel = make_kernel(m.kernel, m.params, data ? &*data : nullptr);

  RunResult r;
  if (m.sampler == "asg") {
    r.output = run_asg(kernel, m.x0, m.chain);
  } else if (m.sampler == "rwmh") {
    RwmhConfig rc;
    rc.chain = m.chain;
    rc.proposal_sd = m.proposal_sd;
    r.output = run_rwmh(kernel, m.x0, rc);
  } else {
    throw InvalidArgument("unknown sampler '" + m.sampler + "'");
  }
  if (r.output.samples.rows() < 4) {
    throw InvalidState("fewer than 4 retained draws; nothing to diagnose");
  }
  r.report = ess_report(r.output.samples, r.output.wall_time_seconds);
  const auto& trace = r.output.log_k_trace;
  const std::size_t burn = std::min<std::size_t>(m.chain.burn_in, trace.size() / 2 - 1);
  r.stationarity = logk_stationarity(trace, burn);
  return r;
}

io::json run_report_json(const RunResult& r) {
  const auto& o = r.output;
  io::json j = io::to_json(r.report);
  j["sampler"] = o.sampler;
  j["cap_hits"] = o.cap_hits;
  j["cap_hit_rate"] = o.cap_hit_rate();
  j["fallback_uses"] = o.fallback_uses;
  j["coordinate_updates"] = o.coordinate_updates;
  j["proposals"] = o.proposals;
  j["reused_brackets"] = o.reused_brackets;
  j["extended_brackets"] = o.extended_brackets;
  j["stopped_on_time"] = o.stopped_on_time;
  if (std::isfinite(o.acceptance_rate)) j["acceptance_rate"] = o.acceptance_rate;
  j["logk_stationarity"] = {{"ks_statistic", r.stationarity.ks_statistic},
                            {"p_value", r.stationarity.p_value},
                            {"n_first", r.stationarity.n_first},
                            {"n_second", r.stationarity.n_second}};
  return j;
}

void write_run_artifacts(const std::filesystem::path& dir, const io::RunManifest& manifest,
                         const RunResult& r) {
  std::filesystem::create_directories(dir);
  const auto& o = r.output;
  io::write_file_atomic(dir / "samples.csv", io::matrix_csv(o.samples));

  std::vector<double> iter(o.log_k_trace.size());
  for (std::size_t i = 0; i < iter.size(); ++i) iter[i] = static_cast<double>(i + 1);
  io::write_file_atomic(dir / "logk_trace.csv",
                        io::columns_csv({"iteration", "log_k", "running_mean"},
                                        {iter, o.log_k_trace, r.stationarity.running_mean}));

  std::vector<std::string> names{"lag"};
  std::vector<std::vector<double>> cols;
  std::vector<double> lags(r.report.max_lag + 1);
  for (std::size_t k = 0; k < lags.size(); ++k) lags[k] = static_cast<double>(k);
  cols.push_back(lags);
  for (std::size_t j = 0; j < r.report.acf.size(); ++j) {
    names.push_back("x" + std::to_string(j + 1));
    cols.push_back(r.report.acf[j]);
  }
  io::write_file_atomic(dir / "acf.csv", io::columns_csv(names, cols));

  std::vector<std::string> rm_names;
  std::vector<std::vector<double>> rm_cols;
  for (Eigen::Index j = 0; j < o.samples.cols(); ++j) {
    std::vector<double> col(static_cast<std::size_t>(o.samples.rows()));
    for (Eigen::Index i = 0; i < o.samples.rows(); ++i) col[static_cast<std::size_t>(i)] = o.samples(i, j);
    rm_names.push_back("x" + std::to_string(j + 1));
    rm_cols.push_back(running_mean(col));
  }
  io::write_file_atomic(dir / "running_mean.csv", io::columns_csv(rm_names, rm_cols));

  io::write_file_atomic(dir / "ess_report.json", run_report_json(r).dump(2) + "\n");
  io::write_file_atomic(dir / "manifest.json", io::to_json(manifest).dump(2) + "\n");
}

}  // namespace asg

#include "asg/stats.hpp"

namespace asg {

std::vector<CoefficientSummary> summarize_posterior(const LogKernel& kernel, const Eigen::MatrixXd& samples,
                                                    const std::vector<std::string>& names) {
  const auto n = samples.rows();
  const auto m = samples.cols();
  if (n == 0) throw InvalidArgument("summarize_posterior: no samples");
  if (names.size() != static_cast<std::size_t>(m)) throw InvalidArgument("summarize_posterior: name count mismatch");

  Eigen::Index best = 0;
  double best_lk = -std::numeric_limits<double>::infinity();
  std::vector<double> row(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = samples(i, j);
    const double lk = kernel.log_eval(row);
    if (lk > best_lk) {
      best_lk = lk;
      best = i;
    }
  }

  std::vector<CoefficientSummary> out;
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = samples(i, j);
    CoefficientSummary s;
    s.name = names[static_cast<std::size_t>(j)];
    s.mode = samples(best, j);
    s.mean = stats::mean(col);
    s.q025 = stats::quantile(col, 0.025);
    s.q975 = stats::quantile(col, 0.975);
    out.push_back(s);
  }
  return out;
}

}  // namespace asg
