#pragma once

// Independent reference computations for the tests. Deliberately naive:
// none of this shares code with the library paths it checks.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Midpoint rule with n equal cells.
inline double midpoint_sum(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i) acc += f(lo + (static_cast<double>(i) + 0.5) * h);
  return static_cast<double>(acc * h);
}

// Plain bisection to width tol.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14) {
  double flo = f(lo);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Equal-tailed interval of a 1-D density on a fine grid (trapezoid CDF).
struct GridInterval {
  double lower, upper, mass;
};
inline GridInterval grid_interval(const std::function<double(double)>& g, double lo, double hi, double eps,
                                  std::size_t n = 2000001) {
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> cdf(n, 0.0);
  double prev = g(lo);
  for (std::size_t i = 1; i < n; ++i) {
    const double cur = g(lo + static_cast<double>(i) * h);
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * h;
    prev = cur;
  }
  const double z = cdf.back();
  auto inv = [&](double target) {
    std::size_t i = 1;
    while (i < n - 1 && cdf[i] < target) ++i;
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double t = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
    return lo + (static_cast<double>(i - 1) + t) * h;
  };
  return {inv(0.5 * eps * z), inv((1.0 - 0.5 * eps) * z), z};
}

inline double soft_threshold(double z, double g) {
  if (z > g) return z - g;
  if (z < -g) return z + g;
  return 0.0;
}

// Coordinate-descent lasso with an unpenalised intercept:
// minimise (1/2N)||y - b0 - X b||^2 + lambda ||b||_1. Returns (b0, b).
inline Eigen::VectorXd lasso_cd(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                                int sweeps = 10000, double tol = 1e-13) {
  const auto n = x.rows();
  const auto p = x.cols();
  const double nn = static_cast<double>(n);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  Eigen::VectorXd r = y;
  for (int s = 0; s < sweeps; ++s) {
    double delta = 0.0;
    const double b0 = beta(0) + r.sum() / nn;
    r.array() -= b0 - beta(0);
    delta = std::max(delta, std::abs(b0 - beta(0)));
    beta(0) = b0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double cc = x.col(j).squaredNorm() / nn;
      const double rho = (x.col(j).dot(r) / nn) + cc * beta(j + 1);
      const double nb = soft_threshold(rho, lambda) / cc;
      if (nb != beta(j + 1)) {
        r -= x.col(j) * (nb - beta(j + 1));
        delta = std::max(delta, std::abs(nb - beta(j + 1)));
        beta(j + 1) = nb;
      }
    }
    if (delta < tol) break;
  }
  return beta;
}

// Least squares with intercept: returns (b0, b) and the posterior sd of each
// coefficient under exp(-RSS/(2N)), i.e. covariance N (A'A)^{-1}.
struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd posterior_sd;
};
inline OlsFit ols_with_intercept(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd a(x.rows(), x.cols() + 1);
  a.col(0).setOnes();
  a.rightCols(x.cols()) = x;
  const Eigen::MatrixXd ata = a.transpose() * a;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(ata);
  OlsFit f;
  f.coef = ldlt.solve(a.transpose() * y);
  const Eigen::MatrixXd cov = static_cast<double>(x.rows()) * ldlt.solve(Eigen::MatrixXd::Identity(ata.rows(), ata.cols()));
  f.posterior_sd = cov.diagonal().cwiseSqrt();
  return f;
}

}  // namespace oracle
