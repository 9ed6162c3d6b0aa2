// asg_cli: run samplers, inspect effective supports, benchmark suites.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "asg/diagnostics.hpp"
#include "asg/error.hpp"
#include "asg/io.hpp"
#include "asg/kernels.hpp"
#include "asg/multichain.hpp"
#include "asg/runner.hpp"
#include "asg/stats.hpp"
#include "asg/support.hpp"
#include "asg/version.hpp"

namespace fs = std::filesystem;
using asg::io::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kCapWarnRate = 1e-3;

asg::ParamMap parse_params(const std::vector<std::string>& kv) {
  asg::ParamMap out;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects name=value, got '" + s + "'");
    const std::string value = s.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw UsageError("--param " + s + ": value is not a number");
    out[s.substr(0, eq)] = v;
  }
  return out;
}

// Flags shared by every command that builds a chain.
struct ChainFlags {
  asg::ChainConfig cfg;
  std::string scan = "systematic";
  std::vector<double> fallback_range{-100.0, 100.0};

  void add(CLI::App* app) {
    app->add_option("--n-samples", cfg.n_samples, "retained draws N")->capture_default_str();
    app->add_option("--burn-in", cfg.burn_in, "burn-in iterations B")->capture_default_str();
    app->add_option("--thin", cfg.thin, "thinning interval L")->capture_default_str();
    app->add_option("--epsilon", cfg.epsilon, "tail mass excluded from each support bracket")->capture_default_str();
    app->add_option("--s0", cfg.s0, "Cauchy scale of the support transform")->capture_default_str();
    app->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app->add_option("--stream", cfg.stream, "RNG stream index")->capture_default_str();
    app->add_option("--scan", scan, "systematic | random_permutation")
        ->check(CLI::IsMember({"systematic", "random_permutation"}))
        ->capture_default_str();
    app->add_option("--max-rejections", cfg.max_rejections, "rejection cap per slice update")->capture_default_str();
    app->add_option("--fallback-range", fallback_range, "grid fallback interval (two values)")->expected(2);
    app->add_flag("--reuse-bracket-if-unchanged", cfg.reuse_bracket_if_unchanged,
                  "skip support re-estimation when the conditioning values are unchanged");
    app->add_flag("--extend-to-slice,!--no-extend-to-slice", cfg.extend_to_slice,
                  "widen each bracket until it covers the current slice (default on)");
    app->add_option("--time-limit", cfg.time_limit_seconds, "stop after this many seconds (0 = off)")
        ->capture_default_str();
  }

  asg::ChainConfig resolve() {
    cfg.scan = asg::scan_order_from_string(scan);
    cfg.fallback_range = {fallback_range[0], fallback_range[1]};
    return cfg;
  }
};

struct DataFlags {
  std::string csv;
  bool synthetic = false;
  asg::SyntheticSpec spec{};

  void add(CLI::App* app) {
    app->add_option("--data-csv", csv, "regression CSV with a 'y' column");
    app->add_flag("--synthetic", synthetic, "generate synthetic regression data");
    app->add_option("--n-obs", spec.n_obs, "synthetic: observations")->capture_default_str();
    app->add_option("--n-pred", spec.n_pred, "synthetic: predictors")->capture_default_str();
    app->add_option("--sparsity", spec.sparsity, "synthetic: non-zero coefficients")->capture_default_str();
    app->add_option("--noise-sd", spec.noise_sd, "synthetic: noise sd")->capture_default_str();
    app->add_option("--amplitude", spec.amplitude, "synthetic: coefficient magnitude")->capture_default_str();
    app->add_option("--intercept", spec.intercept, "synthetic: intercept")->capture_default_str();
    app->add_option("--data-seed", spec.seed, "synthetic: seed")->capture_default_str();
  }

  asg::io::DataSource resolve(bool default_synthetic) const {
    asg::io::DataSource d;
    if (!csv.empty() && synthetic) throw UsageError("--data-csv and --synthetic are exclusive");
    if (!csv.empty()) {
      d.kind = "csv";
      d.csv_path = fs::absolute(csv).string();
    } else if (synthetic || default_synthetic) {
      d.kind = "synthetic";
      d.synthetic = spec;
    }
    return d;
  }
};

void require_kernel(const std::string& name) {
  if (asg::find_kernel_info(name) == nullptr) throw UsageError("unknown kernel '" + name + "'");
}

void warn_cap_hits(const asg::ChainOutput& o, const std::string& label) {
  if (o.sampler == "asg" && o.cap_hit_rate() > kCapWarnRate) {
    std::cerr << "warning: " << label << ": rejection cap hit on " << o.cap_hits << " of "
              << o.coordinate_updates << " updates\n";
  }
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- list-kernels

json kernel_json(const asg::KernelInfo& k) {
  json params = json::array();
  for (const auto& p : k.params) {
    params.push_back({{"name", p.name}, {"default", p.default_value}, {"description", p.description}});
  }
  return {{"name", k.name},
          {"dim", k.default_dim == 0 ? json(nullptr) : json(k.default_dim)},
          {"needs_data", k.needs_data},
          {"params", params},
          {"description", k.description}};
}

int cmd_list_kernels(const std::string& format, bool auxiliary) {
  std::vector<asg::KernelInfo> ks = asg::kernel_registry();
  if (auxiliary) {
    for (const auto& k : asg::auxiliary_kernels()) ks.push_back(k);
  }
  if (format == "json") {
    json arr = json::array();
    for (const auto& k : ks) arr.push_back(kernel_json(k));
    std::cout << json{{"kernels", arr}}.dump(2) << "\n";
    return 0;
  }
  std::printf("%-18s %-6s %s\n", "kernel", "dim", "params (defaults)");
  for (const auto& k : ks) {
    std::string ps;
    for (const auto& p : k.params) {
      if (!ps.empty()) ps += ", ";
      ps += p.name + "=" + asg::io::format_double(p.default_value);
    }
    const std::string dim = k.default_dim == 0 ? "data" : std::to_string(k.default_dim);
    std::printf("%-18s %-6s %s\n", k.name.c_str(), dim.c_str(), ps.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------- sample

int cmd_sample(asg::io::RunManifest m, const std::string& out_dir) {
  m.output_dir = out_dir;
  m.timestamp = asg::io::utc_timestamp();
  m.library_version = asg::kVersion;
  const auto result = asg::run_manifest(m);
  warn_cap_hits(result.output, m.kernel);
  asg::write_run_artifacts(out_dir, m, result);
  std::cout << asg::run_report_json(result).dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- support

int cmd_support(const std::string& kernel_name, const asg::ParamMap& params, const asg::io::DataSource& ds,
                std::size_t coord1, const std::vector<double>& fixed, asg::SupportOptions opts,
                const std::string& format) {
  const auto data = asg::io::load_data(ds);
  const auto kernel = asg::make_kernel(kernel_name, params, data ? &*data : nullptr);
  const std::size_t m = kernel.dim();
  if (coord1 < 1 || coord1 > m) throw UsageError("--coord must be in 1.." + std::to_string(m));
  const std::size_t j = coord1 - 1;

  std::vector<double> point(m, 0.0);
  if (fixed.size() == m) {
    point = fixed;
  } else if (fixed.size() == m - 1) {
    for (std::size_t i = 0, k = 0; i < m; ++i) {
      if (i != j) point[i] = fixed[k++];
    }
  } else if (!(fixed.empty() && m == 1)) {
    throw UsageError("--fixed needs " + std::to_string(m - 1) + " values (or " + std::to_string(m) +
                     " with the target coordinate ignored)");
  }
  const auto cond = asg::Conditional1D::at_point(kernel, j, point);
  const auto est = asg::effective_support_1d(cond, opts);

  if (format == "csv") {
    std::cout << "lower,upper,norm_const,log_norm_const,method\n"
              << asg::io::format_double(est.lower) << "," << asg::io::format_double(est.upper) << ","
              << asg::io::format_double(est.norm_const) << "," << asg::io::format_double(est.log_norm_const)
              << "," << asg::to_string(est.method) << "\n";
    return 0;
  }
  json j_out{{"kernel", kernel_name},
             {"coord", coord1},
             {"point", point},
             {"lower", est.lower},
             {"upper", est.upper},
             {"norm_const", std::isfinite(est.norm_const) ? json(est.norm_const) : json(nullptr)},
             {"log_norm_const", est.log_norm_const},
             {"method", asg::to_string(est.method)},
             {"epsilon", est.epsilon},
             {"s0", est.s0},
             {"evaluations", est.evaluations}};
  if (!est.fallback_reason.empty()) j_out["fallback_reason"] = est.fallback_reason;
  std::cout << j_out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- benchmark

struct Cell {
  std::string kernel;
  std::string sampler;
  std::size_t replicate = 0;
  asg::io::RunManifest manifest;
  bool ok = false;
  std::string error;
  asg::RunResult result;
  json series = json::array();
};

// ESS/s against log10 N on prefixes of a time-budgeted chain, at half-decade
// checkpoints plus the full length.
json ess_rate_series(const asg::ChainOutput& o) {
  json out = json::array();
  const auto n = static_cast<std::size_t>(o.samples.rows());
  std::vector<std::size_t> cps;
  for (double e = 2.0; std::pow(10.0, e) < static_cast<double>(n); e += 0.5) {
    cps.push_back(static_cast<std::size_t>(std::llround(std::pow(10.0, e))));
  }
  if (n >= 4) cps.push_back(n);
  for (const auto k : cps) {
    const Eigen::MatrixXd prefix = o.samples.topRows(static_cast<Eigen::Index>(k));
    const double t = o.retained_at_seconds[k - 1];
    const auto rep = asg::ess_report(prefix, t, std::nullopt, false);
    out.push_back({{"n", k}, {"log10_n", std::log10(static_cast<double>(k))}, {"seconds", t},
                   {"min_ess", rep.min_ess}, {"ess_per_second", rep.ess_per_second}});
  }
  return out;
}

json mean_sd(const std::vector<double>& v) {
  if (v.empty()) return nullptr;
  const double mu = asg::stats::mean(v);
  const double sd = v.size() > 1 ? asg::stats::stddev(v) : 0.0;
  return {{"mean", mu}, {"sd", sd}, {"values", v}};
}

int cmd_benchmark(const std::vector<std::string>& kernels, const std::vector<std::string>& samplers,
                  const std::string& budget, double seconds, std::size_t max_samples, std::size_t replicates,
                  asg::ChainConfig base, const std::vector<double>& proposal_sd, const asg::io::DataSource& ds,
                  const std::string& out_dir, int jobs) {
  if (kernels.empty() || samplers.empty()) throw UsageError("benchmark: empty suite (need --kernels and --samplers)");
  if (replicates == 0) throw UsageError("benchmark: --replicates must be positive");
  if (budget == "fixed_time" && !(seconds > 0.0)) throw UsageError("benchmark: --seconds must be positive");
  for (const auto& k : kernels) require_kernel(k);

  std::vector<Cell> cells;
  for (const auto& k : kernels) {
    for (const auto& s : samplers) {
      for (std::size_t r = 0; r < replicates; ++r) {
        Cell c;
        c.kernel = k;
        c.sampler = s;
        c.replicate = r;
        auto& m = c.manifest;
        m.kernel = k;
        m.sampler = s;
        m.chain = base;
        m.chain.stream = base.stream + cells.size();
        if (budget == "fixed_time") {
          m.chain.n_samples = max_samples;
          m.chain.time_limit_seconds = seconds;
        }
        m.proposal_sd = proposal_sd;
        if (asg::find_kernel_info(k)->needs_data) m.data = ds;
        m.output_dir = (fs::path(out_dir) / (k + "_" + s + "_r" + std::to_string(r))).string();
        m.timestamp = asg::io::utc_timestamp();
        m.library_version = asg::kVersion;
        cells.push_back(std::move(c));
      }
    }
  }

  const int n_cells = static_cast<int>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < n_cells; ++i) {
    auto& c = cells[static_cast<std::size_t>(i)];
    try {
      c.result = asg::run_manifest(c.manifest);
      asg::write_run_artifacts(c.manifest.output_dir, c.manifest, c.result);
      if (budget == "fixed_time") c.series = ess_rate_series(c.result.output);
      c.ok = true;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  }

  json cell_arr = json::array();
  json summary = json::array();
  std::printf("%-18s %-6s %5s  %-18s %-20s %-22s\n", "kernel", "sampler", "ok", "time (s)", "min ESS",
              "ESS/s");
  for (const auto& k : kernels) {
    for (const auto& s : samplers) {
      std::vector<double> times, miness, rates;
      std::vector<std::vector<double>> per_dim;
      std::size_t failed = 0;
      for (const auto& c : cells) {
        if (c.kernel != k || c.sampler != s) continue;
        json cj{{"kernel", k}, {"sampler", s}, {"replicate", c.replicate}, {"stream", c.manifest.chain.stream},
                {"output_dir", c.manifest.output_dir}, {"ok", c.ok}};
        if (!c.ok) {
          ++failed;
          cj["error"] = c.error;
        } else {
          cj["report"] = asg::run_report_json(c.result);
          if (budget == "fixed_time") cj["ess_rate_series"] = c.series;
          warn_cap_hits(c.result.output, k + "/" + s + " r" + std::to_string(c.replicate));
          times.push_back(c.result.output.wall_time_seconds);
          miness.push_back(c.result.report.min_ess);
          rates.push_back(c.result.report.ess_per_second);
          per_dim.push_back(c.result.report.per_dim_ess);
        }
        cell_arr.push_back(cj);
      }
      json per_dim_mean = nullptr;
      if (!per_dim.empty()) {
        std::vector<double> pm(per_dim[0].size(), 0.0);
        for (const auto& v : per_dim) {
          for (std::size_t d = 0; d < pm.size(); ++d) pm[d] += v[d] / static_cast<double>(per_dim.size());
        }
        per_dim_mean = pm;
      }
      summary.push_back({{"kernel", k}, {"sampler", s}, {"replicates", replicates}, {"failed", failed},
                         {"wall_time_seconds", mean_sd(times)}, {"min_ess", mean_sd(miness)},
                         {"ess_per_second", mean_sd(rates)}, {"per_dim_ess_mean", per_dim_mean}});
      auto ms = [](const std::vector<double>& v, int p) {
        if (v.empty()) return std::string("-");
        const double sd = v.size() > 1 ? asg::stats::stddev(v) : 0.0;
        return fmt(asg::stats::mean(v), p) + " +- " + fmt(sd, p);
      };
      const std::string okc = std::to_string(replicates - failed) + "/" + std::to_string(replicates);
      std::printf("%-18s %-6s %5s  %-18s %-20s %-22s\n", k.c_str(), s.c_str(), okc.c_str(), ms(times, 3).c_str(),
                  ms(miness, 1).c_str(), ms(rates, 1).c_str());
    }
  }

  json report{{"budget", budget},
              {"seconds", budget == "fixed_time" ? json(seconds) : json(nullptr)},
              {"n_samples", budget == "fixed_samples" ? json(base.n_samples) : json(nullptr)},
              {"replicates", replicates},
              {"seed", base.seed},
              {"jobs", jobs},
              {"timestamp", asg::io::utc_timestamp()},
              {"library_version", asg::kVersion},
              {"summary", summary},
              {"cells", cell_arr}};
  fs::create_directories(out_dir);
  asg::io::write_file_atomic(fs::path(out_dir) / "benchmark_report.json", report.dump(2) + "\n");
  std::cout << "report: " << (fs::path(out_dir) / "benchmark_report.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- lasso

int cmd_lasso(const asg::io::DataSource& ds, double lambda, double alpha, bool n_scaled, asg::ChainConfig cfg,
              bool full, const std::string& out_dir) {
  if (full) cfg.n_samples = 100000;
  asg::io::RunManifest m;
  m.kernel = "lasso_bridge";
  m.params = {{"lambda", lambda}, {"alpha", alpha}, {"n_scaled", n_scaled ? 1.0 : 0.0}};
  m.sampler = "asg";
  m.chain = cfg;
  m.data = ds;
  m.output_dir = out_dir;
  m.timestamp = asg::io::utc_timestamp();
  m.library_version = asg::kVersion;

  const auto data = asg::io::load_data(ds);
  if (!data || data->n_pred() < 2) throw asg::InvalidArgument("lasso: data needs at least 2 predictors");
  const auto kernel = asg::make_kernel(m.kernel, m.params, &*data);

  const auto result = asg::run_manifest(m);
  warn_cap_hits(result.output, "lasso_bridge");
  asg::write_run_artifacts(out_dir, m, result);

  std::vector<std::string> names{"intercept"};
  for (const auto& n : data->predictor_names) names.push_back(n);
  const auto summ = asg::summarize_posterior(kernel, result.output.samples, names);

  json coefs = json::array();
  std::printf("%-14s %10s %10s %10s %10s\n", "coefficient", "mode", "mean", "q2.5", "q97.5");
  for (const auto& c : summ) {
    coefs.push_back({{"name", c.name}, {"mode", c.mode}, {"mean", c.mean}, {"q025", c.q025}, {"q975", c.q975}});
    std::printf("%-14s %10.4f %10.4f %10.4f %10.4f\n", c.name.c_str(), c.mode, c.mean, c.q025, c.q975);
  }
  json out{{"lambda", lambda},
           {"alpha", alpha},
           {"n_scaled", n_scaled},
           {"mode_estimator", "retained draw with the largest log K"},
           {"n_retained", result.output.samples.rows()},
           {"min_ess", result.report.min_ess},
           {"wall_time_seconds", result.output.wall_time_seconds},
           {"coefficients", coefs}};
  asg::io::write_file_atomic(fs::path(out_dir) / "posterior_summary.json", out.dump(2) + "\n");
  return 0;
}

int default_jobs() { return asg::default_parallelism(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automated sliced Gibbs sampler: sampling, support estimation and benchmarks.\n"
               "Default parallelism comes from ASG_NUM_THREADS (else all cores)."};
  app.set_version_flag("--version", std::string(asg::kVersion));
  app.require_subcommand(1);


  // list-kernels
  auto* lk = app.add_subcommand("list-kernels", "List registered kernels with dimensions and parameter defaults");
  std::string lk_format = "table";
  bool lk_aux = false;
  lk->add_option("--format", lk_format, "table | json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  lk->add_flag("--include-auxiliary", lk_aux, "also list the test kernels (gaussian, uniform)");

  // sample
  auto* sp = app.add_subcommand("sample", "Run one chain and write samples, traces and diagnostics");
  std::string sp_kernel, sp_sampler = "asg", sp_manifest, sp_out;
  std::vector<std::string> sp_params;
  std::vector<double> sp_psd{1.0}, sp_x0;
  ChainFlags sp_chain;
  DataFlags sp_data;
  sp->add_option("--kernel", sp_kernel, "kernel name (see list-kernels)");
  sp->add_option("--param", sp_params, "kernel parameter name=value (repeatable)");
  sp->add_option("--sampler", sp_sampler, "asg | rwmh")->check(CLI::IsMember({"asg", "rwmh"}))->capture_default_str();
  sp->add_option("--proposal-sd", sp_psd, "RW-MH proposal sd (one value, or one per coordinate)");
  sp->add_option("--x0", sp_x0, "initial point");
  sp->add_option("--manifest", sp_manifest, "replay a stored manifest.json (other run flags are ignored)");
  sp->add_option("--output-dir", sp_out, "directory for output files")->required();
  sp_chain.add(sp);
  sp_data.add(sp);

  // support
  auto* su = app.add_subcommand("support", "Effective support of one coordinate conditional");
  std::string su_kernel;
  std::vector<std::string> su_params;
  std::size_t su_coord = 1;
  std::vector<double> su_fixed;
  std::vector<double> su_fallback{-100.0, 100.0};
  std::string su_method = "auto";
  asg::SupportOptions su_opts;
  DataFlags su_data;
  std::string su_format = "json";
  su->add_option("--kernel", su_kernel, "kernel name")->required();
  su->add_option("--param", su_params, "kernel parameter name=value (repeatable)");
  su->add_option("--coord", su_coord, "1-based coordinate")->capture_default_str();
  su->add_option("--fixed", su_fixed, "values of the other coordinates, in order");
  su->add_option("--epsilon", su_opts.epsilon, "excluded tail mass")->capture_default_str();
  su->add_option("--s0", su_opts.s0, "Cauchy scale")->capture_default_str();
  su->add_option("--fallback-range", su_fallback, "grid fallback interval")->expected(2);
  su->add_option("--method", su_method, "auto | cauchy | grid")
      ->check(CLI::IsMember({"auto", "cauchy", "grid"}))
      ->capture_default_str();
  su->add_option("--format", su_format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  su_data.add(su);

  // benchmark
  auto* bm = app.add_subcommand("benchmark", "Run kernels x samplers x replicates and summarise ESS and ESS/s");
  std::vector<std::string> bm_kernels, bm_samplers{"asg", "rwmh"};
  std::string bm_budget = "fixed_samples", bm_out;
  double bm_seconds = 5.0;
  std::size_t bm_max = 1000000, bm_reps = 5;
  std::vector<double> bm_psd{1.0};
  int bm_jobs = default_jobs();
  ChainFlags bm_chain;
  DataFlags bm_data;
  bm->add_option("--kernels", bm_kernels, "kernels to run (comma-separated or repeated)")->delimiter(',');
  bm->add_option("--samplers", bm_samplers, "samplers to run (asg, rwmh)")
      ->delimiter(',')
      ->check(CLI::IsMember({"asg", "rwmh"}))
      ->capture_default_str();
  bm->add_option("--budget", bm_budget, "fixed_samples | fixed_time")
      ->check(CLI::IsMember({"fixed_samples", "fixed_time"}))
      ->capture_default_str();
  bm->add_option("--seconds", bm_seconds, "wall-clock budget per run (fixed_time)")->capture_default_str();
  bm->add_option("--max-samples", bm_max, "retained-draw cap for fixed_time runs")->capture_default_str();
  bm->add_option("--replicates", bm_reps, "replicates per cell")->capture_default_str();
  bm->add_option("--proposal-sd", bm_psd, "RW-MH proposal sd");
  bm->add_option("--jobs", bm_jobs, "parallel cells (default: ASG_NUM_THREADS or all cores)")->capture_default_str();
  bm->add_option("--output-dir", bm_out, "report and per-run directories")->required();
  bm_chain.add(bm);
  bm_data.add(bm);

  // lasso
  auto* la = app.add_subcommand("lasso", "Bayesian lasso / bridge regression posterior summary");
  double la_lambda = 0.1, la_alpha = 1.0;
  bool la_nscaled = false, la_full = false;
  std::string la_out;
  ChainFlags la_chain;
  la_chain.cfg.n_samples = 20000;
  la_chain.cfg.burn_in = 2500;
  DataFlags la_data;
  la->add_option("--lambda", la_lambda, "penalty weight")->capture_default_str();
  la->add_option("--alpha", la_alpha, "penalty exponent")->capture_default_str();
  la->add_flag("--n-scaled", la_nscaled, "multiply the whole exponent by the number of observations");
  la->add_flag("--full", la_full, "run 100000 retained draws");
  la->add_option("--output-dir", la_out, "directory for output files")->required();
  la_chain.add(la);
  la_data.add(la);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (lk->parsed()) return cmd_list_kernels(lk_format, lk_aux);

    if (sp->parsed()) {
      asg::io::RunManifest m;
      if (!sp_manifest.empty()) {
        std::ifstream in(sp_manifest);
        if (!in) throw std::runtime_error("cannot read manifest " + sp_manifest);
        json j;
        try {
          in >> j;
        } catch (const json::exception& e) {
          throw UsageError(std::string("malformed manifest: ") + e.what());
        }
        m = asg::io::manifest_from_json(j);
      } else {
        if (sp_kernel.empty()) throw UsageError("sample: --kernel or --manifest is required");
        require_kernel(sp_kernel);
        m.kernel = sp_kernel;
        m.params = parse_params(sp_params);
        m.sampler = sp_sampler;
        m.chain = sp_chain.resolve();
        m.proposal_sd = sp_psd;
        if (!sp_x0.empty()) m.x0 = sp_x0;
        m.data = sp_data.resolve(false);
      }
      return cmd_sample(m, sp_out);
    }

    if (su->parsed()) {
      require_kernel(su_kernel);
      su_opts.fallback_range = {su_fallback[0], su_fallback[1]};
      su_opts.path = su_method == "cauchy" ? asg::SupportPath::cauchy_only
                     : su_method == "grid" ? asg::SupportPath::grid_only
                                           : asg::SupportPath::automatic;
      return cmd_support(su_kernel, parse_params(su_params), su_data.resolve(false), su_coord, su_fixed, su_opts,
                         su_format);
    }

    if (bm->parsed()) {
      if (bm_jobs < 1) throw UsageError("--jobs must be positive");
      return cmd_benchmark(bm_kernels, bm_samplers, bm_budget, bm_seconds, bm_max, bm_reps, bm_chain.resolve(),
                           bm_psd, bm_data.resolve(true), bm_out, bm_jobs);
    }

    if (la->parsed()) {
      return cmd_lasso(la_data.resolve(true), la_lambda, la_alpha, la_nscaled, la_chain.resolve(), la_full, la_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const asg::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
