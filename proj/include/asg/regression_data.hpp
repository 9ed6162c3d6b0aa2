#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asg {

/// Column-standardized design (mean 0, unit sample sd) and response.
struct RegressionData {
  Eigen::MatrixXd design;
  Eigen::VectorXd response;
  std::vector<std::string> predictor_names;

  std::size_t n_obs() const { return static_cast<std::size_t>(design.rows()); }
  std::size_t n_pred() const { return static_cast<std::size_t>(design.cols()); }
};

struct SyntheticSpec {
  std::size_t n_obs = 100;
  std::size_t n_pred = 20;
  std::size_t sparsity = 5;
  double noise_sd = 1.0;
  double amplitude = 1.0;
  double intercept = 0.0;
  std::uint64_t seed = 42;
};

struct SyntheticRegression {
  RegressionData data;
  double true_intercept = 0.0;
  Eigen::VectorXd true_coefficients;
};

/// Centres each column and scales it to unit sample standard deviation.
/// Throws InvalidArgument for a zero-variance column or fewer than two rows.
void standardize_columns(Eigen::MatrixXd& design);

/// Reads a UTF-8 CSV with a header row. The column named `y` is the
/// response; every other column is a numeric predictor.
RegressionData load_regression_csv(const std::filesystem::path& path);

/// Standard-normal design (standardized after drawing), `sparsity` non-zero
/// coefficients of magnitude `amplitude` with random signs and positions,
/// Gaussian noise. Reproducible from the seed.
SyntheticRegression make_synthetic_regression(const SyntheticSpec& spec);

}  // namespace asg
