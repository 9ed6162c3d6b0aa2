#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "asg/diagnostics.hpp"
#include "asg/kernel.hpp"
#include "asg/regression_data.hpp"
#include "asg/sampler.hpp"

namespace asg::io {

using json = nlohmann::json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`.
/// Throws std::runtime_error if the directory is not writable.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Header `x1,...,xm`, one row per sample.
std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& prefix = "x");

/// One column per series; all series must have equal length.
std::string columns_csv(const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& columns);

/// Parses a numeric CSV with a header row (as written by matrix_csv).
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

json to_json(const ChainConfig& c);
ChainConfig chain_config_from_json(const json& j);

json to_json(const EssReport& r, bool include_acf = false);

/// Where regression data for lasso_bridge came from.
struct DataSource {
  std::string kind = "none";  // none | csv | synthetic
  std::string csv_path;
  SyntheticSpec synthetic{};
};

json to_json(const DataSource& d);
DataSource data_source_from_json(const json& j);
/// Loads (or regenerates) the data; nullopt for kind == "none".
std::optional<RegressionData> load_data(const DataSource& d);

struct RunManifest {
  std::string kernel;
  ParamMap params;
  std::string sampler = "asg";  // asg | rwmh
  ChainConfig chain{};
  std::vector<double> proposal_sd{1.0};
  std::optional<std::vector<double>> x0;
  DataSource data{};
  std::string output_dir;
  std::string timestamp;
  std::string library_version;
};

json to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace asg::io
