#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "asg/diagnostics.hpp"
#include "asg/io.hpp"
#include "asg/kernels.hpp"
#include "asg/sampler.hpp"

namespace asg {

struct RunResult {
  ChainOutput output;
  EssReport report;
  StationaritySummary stationarity;
};

/// Builds the kernel (loading data if the manifest names a source) and runs
/// the requested sampler. Pure function of the manifest.
RunResult run_manifest(const io::RunManifest& manifest);

/// Writes samples.csv, logk_trace.csv, acf.csv, running_mean.csv,
/// ess_report.json and manifest.json into `dir` (created if missing).
void write_run_artifacts(const std::filesystem::path& dir, const io::RunManifest& manifest,
                         const RunResult& result);

/// ess_report.json body: the EssReport plus wall time, sampler counters and
/// the log-kernel stationarity summary.
io::json run_report_json(const RunResult& result);

}  // namespace asg

namespace asg {

struct CoefficientSummary {
  std::string name;
  double mode = 0.0;
  double mean = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
};

/// Per-column summary of a chain. The mode is the retained draw with the
/// largest log K (the log-kernel trace is re-evaluated on the samples).
std::vector<CoefficientSummary> summarize_posterior(const LogKernel& kernel, const Eigen::MatrixXd& samples,
                                                    const std::vector<std::string>& names);

}  // namespace asg
