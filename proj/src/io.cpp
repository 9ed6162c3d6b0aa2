#include "asg/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "asg/error.hpp"

namespace asg::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to " + dir.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& prefix) {
  std::string s;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) s += ',';
    s += prefix + std::to_string(j + 1);
  }
  s += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += format_double(m(i, j));
    }
    s += '\n';
  }
  return s;
}

std::string columns_csv(const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw InvalidArgument("columns_csv: name/column count mismatch");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) throw InvalidArgument("columns_csv: columns differ in length");
  }
  std::string s;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) s += ',';
    s += names[j];
  }
  s += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) s += ',';
      s += format_double(columns[j][i]);
    }
    s += '\n';
  }
  return s;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty csv " + path.string());
  const auto cols = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  std::vector<double> values;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string_view rest(line);
    Eigen::Index c = 0;
    while (true) {
      const auto pos = rest.find(',');
      const auto cell = rest.substr(0, pos);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw InvalidArgument("non-numeric cell in " + path.string());
      }
      values.push_back(v);
      ++c;
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (c != cols) throw InvalidArgument("ragged row in " + path.string());
    ++rows;
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

json to_json(const ChainConfig& c) {
  return json{{"n_samples", c.n_samples},
              {"burn_in", c.burn_in},
              {"thin", c.thin},
              {"epsilon", c.epsilon},
              {"s0", c.s0},
              {"seed", c.seed},
              {"stream", c.stream},
              {"scan", to_string(c.scan)},
              {"max_rejections", c.max_rejections},
              {"fallback_range", {c.fallback_range.first, c.fallback_range.second}},
              {"reuse_bracket_if_unchanged", c.reuse_bracket_if_unchanged},
              {"extend_to_slice", c.extend_to_slice},
              {"use_fast_conditional", c.use_fast_conditional},
              {"time_limit_seconds", c.time_limit_seconds}};
}

ChainConfig chain_config_from_json(const json& j) {
  ChainConfig c;
  c.n_samples = j.at("n_samples").get<std::size_t>();
  c.burn_in = j.at("burn_in").get<std::size_t>();
  c.thin = j.at("thin").get<std::size_t>();
  c.epsilon = j.at("epsilon").get<double>();
  c.s0 = j.at("s0").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.stream = j.value("stream", std::uint64_t{0});
  c.scan = scan_order_from_string(j.at("scan").get<std::string>());
  c.max_rejections = j.at("max_rejections").get<std::size_t>();
  const auto& fr = j.at("fallback_range");
  c.fallback_range = {fr.at(0).get<double>(), fr.at(1).get<double>()};
  c.reuse_bracket_if_unchanged = j.value("reuse_bracket_if_unchanged", false);
  c.extend_to_slice = j.value("extend_to_slice", true);
  c.use_fast_conditional = j.value("use_fast_conditional", true);
  c.time_limit_seconds = j.value("time_limit_seconds", 0.0);
  return c;
}

json to_json(const EssReport& r, bool include_acf) {
  std::vector<bool> floored(r.tau_floored.begin(), r.tau_floored.end());
  json j{{"per_dim_tau", r.per_dim_tau},
         {"per_dim_ess", r.per_dim_ess},
         {"tau_floored", floored},
         {"min_ess", r.min_ess},
         {"ess_per_second", r.ess_per_second},
         {"wall_time_seconds", r.wall_time_seconds},
         {"n_retained", r.n_retained},
         {"max_lag", r.max_lag}};
  if (include_acf) j["acf"] = r.acf;
  return j;
}

json to_json(const DataSource& d) {
  json j{{"kind", d.kind}};
  if (d.kind == "csv") j["path"] = d.csv_path;
  if (d.kind == "synthetic") {
    const auto& s = d.synthetic;
    j["n_obs"] = s.n_obs;
    j["n_pred"] = s.n_pred;
    j["sparsity"] = s.sparsity;
    j["noise_sd"] = s.noise_sd;
    j["amplitude"] = s.amplitude;
    j["intercept"] = s.intercept;
    j["seed"] = s.seed;
  }
  return j;
}

DataSource data_source_from_json(const json& j) {
  DataSource d;
  d.kind = j.value("kind", std::string("none"));
  if (d.kind == "csv") {
    d.csv_path = j.at("path").get<std::string>();
  } else if (d.kind == "synthetic") {
    auto& s = d.synthetic;
    s.n_obs = j.at("n_obs").get<std::size_t>();
    s.n_pred = j.at("n_pred").get<std::size_t>();
    s.sparsity = j.at("sparsity").get<std::size_t>();
    s.noise_sd = j.at("noise_sd").get<double>();
    s.amplitude = j.at("amplitude").get<double>();
    s.intercept = j.at("intercept").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
  } else if (d.kind != "none") {
    throw InvalidArgument("unknown data source kind '" + d.kind + "'");
  }
  return d;
}

std::optional<RegressionData> load_data(const DataSource& d) {
  if (d.kind == "csv") return load_regression_csv(d.csv_path);
  if (d.kind == "synthetic") return make_synthetic_regression(d.synthetic).data;
  return std::nullopt;
}

json to_json(const RunManifest& m) {
  json params = json::object();
  for (const auto& [k, v] : m.params) params[k] = v;
  json j{{"kernel", m.kernel},
         {"params", params},
         {"sampler", m.sampler},
         {"chain", to_json(m.chain)},
         {"proposal_sd", m.proposal_sd},
         {"data", to_json(m.data)},
         {"output_dir", m.output_dir},
         {"timestamp", m.timestamp},
         {"library_version", m.library_version},
         {"seed", m.chain.seed}};
  j["x0"] = m.x0 ? json(*m.x0) : json(nullptr);
  return j;
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.kernel = j.at("kernel").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) m.params[k] = v.get<double>();
  m.sampler = j.at("sampler").get<std::string>();
  if (m.sampler != "asg" && m.sampler != "rwmh") throw InvalidArgument("unknown sampler '" + m.sampler + "'");
  m.chain = chain_config_from_json(j.at("chain"));
  m.proposal_sd = j.value("proposal_sd", std::vector<double>{1.0});
  if (j.contains("x0") && !j.at("x0").is_null()) m.x0 = j.at("x0").get<std::vector<double>>();
  if (j.contains("data")) m.data = data_source_from_json(j.at("data"));
  m.output_dir = j.value("output_dir", std::string());
  m.timestamp = j.value("timestamp", std::string());
  m.library_version = j.value("library_version", std::string());
  return m;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace asg::io
