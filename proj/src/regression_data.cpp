#include "asg/regression_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "asg/error.hpp"
#include "asg/rng.hpp"

namespace asg {

namespace {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string_view rest(line);
  while (true) {
    const auto pos = rest.find(',');
    out.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InvalidArgument("regression csv: non-numeric cell '" + cell + "' at data row " +
                          std::to_string(row + 1) + ", column '" + column + "'");
  }
  return v;
}

}  // namespace

void standardize_columns(Eigen::MatrixXd& design) {
  const auto n = design.rows();
  if (n < 2) throw InvalidArgument("standardize_columns: need at least two rows");
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    auto col = design.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0) || sd <= 1e-12 * (1.0 + std::abs(mean))) {
      throw InvalidArgument("standardize_columns: column " + std::to_string(j) +
                            " has zero variance");
    }
    col /= sd;
    // A second centring pass removes the O(eps) residual mean left by the first.
    col.array() -= col.mean();
  }
}

RegressionData load_regression_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("regression csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("regression csv: empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);

  const auto y_it = std::find(header.begin(), header.end(), "y");
  if (y_it == header.end()) throw InvalidArgument("regression csv: missing 'y' column");
  const auto y_col = static_cast<std::size_t>(y_it - header.begin());
  if (header.size() < 2) throw InvalidArgument("regression csv: no predictor columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw InvalidArgument("regression csv: row " + std::to_string(rows.size() + 1) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], rows.size(), header[c]);
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw InvalidArgument("regression csv: need at least two observations");

  RegressionData data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  data.design.resize(n, p);
  data.response.resize(n);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != y_col) data.predictor_names.push_back(header[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index j = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == y_col) {
        data.response(i) = rows[static_cast<std::size_t>(i)][c];
      } else {
        data.design(i, j++) = rows[static_cast<std::size_t>(i)][c];
      }
    }
  }
  standardize_columns(data.design);
  return data;
}

SyntheticRegression make_synthetic_regression(const SyntheticSpec& spec) {
  if (spec.n_pred < 1 || spec.n_obs <= spec.n_pred) {
    throw InvalidArgument("synthetic regression: need n_obs > n_pred >= 1");
  }
  if (spec.sparsity > spec.n_pred) {
    throw InvalidArgument("synthetic regression: sparsity exceeds n_pred");
  }
  if (!(spec.noise_sd >= 0.0)) throw InvalidArgument("synthetic regression: noise_sd < 0");

  Rng rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n_obs);
  const auto p = static_cast<Eigen::Index>(spec.n_pred);

  SyntheticRegression out;
  out.data.design.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out.data.design(i, j) = rng.normal();
  }
  standardize_columns(out.data.design);
  for (Eigen::Index j = 0; j < p; ++j) out.data.predictor_names.push_back("z" + std::to_string(j + 1));

  // Partial Fisher-Yates picks the active set.
  std::vector<std::size_t> idx(spec.n_pred);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  out.true_coefficients = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < spec.sparsity; ++k) {
    const auto span = static_cast<std::uint64_t>(spec.n_pred - k);
    const auto pick = k + static_cast<std::size_t>(rng() % span);
    std::swap(idx[k], idx[pick]);
    const double sign = (rng() & 1U) ? 1.0 : -1.0;
    out.true_coefficients(static_cast<Eigen::Index>(idx[k])) = sign * spec.amplitude;
  }
  out.true_intercept = spec.intercept;

  out.data.response = out.data.design * out.true_coefficients;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.data.response(i) += spec.intercept + spec.noise_sd * rng.normal();
  }
  return out;
}

}  // namespace asg
