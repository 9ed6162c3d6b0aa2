#include "asg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "asg/error.hpp"

namespace asg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double log_sum_exp(std::initializer_list<double> terms) {
  double hi = kNegInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

// log of (1/2) Beta((x - shift)/2; a, b) on the open unit interval.
struct HalfBeta {
  double shift;
  double a;
  double b;
  double log_const;  // log(weight / 2) - log B(a, b)

  HalfBeta(double weight, double shift_, double a_, double b_)
      : shift(shift_), a(a_), b(b_),
        log_const(std::log(0.5 * weight) - (std::lgamma(a_) + std::lgamma(b_) - std::lgamma(a_ + b_))) {}

  double operator()(double x) const {
    const double t = 0.5 * (x - shift);
    if (!(t > 0.0 && t < 1.0)) return kNegInf;
    double v = log_const;
    if (a != 1.0) v += (a - 1.0) * std::log(t);
    if (b != 1.0) v += (b - 1.0) * std::log1p(-t);
    return v;
  }
};

std::size_t dim_param(const ParamMap& p, const std::string& kernel) {
  const double d = p.at("dim");
  if (!(d >= 1.0) || d != std::floor(d) || d > 1e6) {
    throw InvalidArgument(kernel + ": 'dim' must be a positive integer");
  }
  return static_cast<std::size_t>(d);
}

void require_positive(const ParamMap& p, const std::string& key, const std::string& kernel) {
  const double v = p.at(key);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(kernel + ": parameter '" + key + "' must be positive and finite");
  }
}

LogKernel make_beta_mixture(const ParamMap& p) {
  // Component supports are disjoint, so at most one term is finite.
  const HalfBeta c1(0.3, -5.0, 0.5, 1.0);
  const HalfBeta c2(0.4, -1.0, 2.0, 2.0);
  const HalfBeta c3(0.3, 5.0, 1.0, 0.5);
  return LogKernel("beta_mixture", 1, p, [c1, c2, c3](std::span<const double> x) {
    const double v = x[0];
    return log_sum_exp({c1(v), c2(v), c3(v)});
  });
}

LogKernel make_rosenbrock(const ParamMap& p) {
  return LogKernel("rosenbrock", 2, p, [](std::span<const double> x) {
    const double r = x[1] - x[0] * x[0];
    return -x[0] * x[0] / 10.0 - x[1] * x[1] / 10.0 - 2.0 * r * r;
  });
}

LogKernel make_ackley(const ParamMap& p) {
  const std::size_t m = dim_param(p, "ackley");
  require_positive(p, "temp", "ackley");
  require_positive(p, "L", "ackley");
  const double temp = p.at("temp");
  const double box = p.at("L");
  return LogKernel("ackley", m, p, [m, temp, box](std::span<const double> x) {
    constexpr double a = 20.0;
    constexpr double b = 0.2;
    constexpr double c = 2.0 * kPi;
    double sq = 0.0;
    double cs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(std::abs(x[i]) <= box)) return kNegInf;
      sq += x[i] * x[i];
      cs += std::cos(c * x[i]);
    }
    const double md = static_cast<double>(m);
    const double f = -a * std::exp(-b * std::sqrt(sq / md)) - std::exp(cs / md) + a + std::numbers::e;
    return -f / temp;
  });
}

LogKernel make_radial_exp(const ParamMap& p) {
  const std::size_t m = dim_param(p, "radial_exp");
  return LogKernel("radial_exp", m, p, [m](std::span<const double> x) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) sq += x[i] * x[i];
    return -std::sqrt(sq);
  });
}

LogKernel make_lasso_bridge(const ParamMap& p, const RegressionData* data) {
  if (data == nullptr) throw InvalidArgument("lasso_bridge: regression data required");
  const double lambda = p.at("lambda");
  const double alpha = p.at("alpha");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lasso_bridge: 'lambda' must be non-negative");
  }
  require_positive(p, "alpha", "lasso_bridge");
  const double n_scaled = p.at("n_scaled");
  if (n_scaled != 0.0 && n_scaled != 1.0) throw InvalidArgument("lasso_bridge: 'n_scaled' must be 0 or 1");

  // Shared, immutable copy so the kernel outlives the caller's data object.
  auto shared = std::make_shared<const RegressionData>(*data);
  const std::size_t pdim = shared->n_pred();
  const double inv_2n = 0.5 / static_cast<double>(shared->n_obs());
  // Optional overall factor N: exp(-[RSS/2 + N lambda sum|beta|^alpha]).
  const double weight = n_scaled == 1.0 ? static_cast<double>(shared->n_obs()) : 1.0;

  auto penalty_term = [lambda, alpha](double beta) {
    return beta == 0.0 ? 0.0 : lambda * std::pow(std::abs(beta), alpha);
  };

  LogEvalFn eval = [shared, pdim, inv_2n, weight, penalty_term](std::span<const double> x) {
    const auto& z = shared->design;
    const auto& y = shared->response;
    const Eigen::Map<const Eigen::VectorXd> beta(x.data() + 1, static_cast<Eigen::Index>(pdim));
    const double rss = (y - z * beta).array().operator-(x[0]).square().sum();
    double pen = 0.0;
    for (std::size_t j = 1; j <= pdim; ++j) pen += penalty_term(x[j]);
    return -weight * (inv_2n * rss + pen);
  };

  // Coordinate-wise sufficient statistics: with r the residual excluding
  // coordinate j and c its column, RSS(z) = r'r - 2 z r'c + z^2 c'c.
  ConditionalFactory fast = [shared, pdim, inv_2n, weight, penalty_term](
                                std::size_t coord, std::span<const double> point)
      -> std::function<double(double)> {
    const auto& zmat = shared->design;
    const auto n = zmat.rows();
    const Eigen::Map<const Eigen::VectorXd> beta(point.data() + 1, static_cast<Eigen::Index>(pdim));
    Eigen::VectorXd resid = shared->response - zmat * beta;
    resid.array() -= point[0];
    double s_cc;
    double s_rc;
    double other_pen = 0.0;
    for (std::size_t j = 1; j <= pdim; ++j) {
      if (j != coord) other_pen += penalty_term(point[j]);
    }
    if (coord == 0) {
      resid.array() += point[0];
      s_cc = static_cast<double>(n);
      s_rc = resid.sum();
    } else {
      const auto col = zmat.col(static_cast<Eigen::Index>(coord - 1));
      resid += col * point[coord];
      s_cc = col.squaredNorm();
      s_rc = resid.dot(col);
    }
    const double s_rr = resid.squaredNorm();
    const bool penalised = coord != 0;
    return [=](double v) {
      const double rss = std::max(0.0, s_rr - 2.0 * v * s_rc + v * v * s_cc);
      return -weight * (inv_2n * rss + other_pen + (penalised ? penalty_term(v) : 0.0));
    };
  };

  return LogKernel("lasso_bridge", pdim + 1, p, std::move(eval), std::move(fast));
}

LogKernel make_funnel(const ParamMap& p) {
  const std::size_t d = dim_param(p, "funnel");
  if (d < 2) throw InvalidArgument("funnel: 'dim' must be at least 2");
  require_positive(p, "sigma", "funnel");
  const double sigma = p.at("sigma");
  const double mu = p.at("mu");
  return LogKernel("funnel", d, p, [d, sigma, mu](std::span<const double> x) {
    const double v = x[d - 1];
    double lp = -v * v / (2.0 * sigma * sigma) - 0.5 * std::log(2.0 * kPi * sigma * sigma);
    const double per_coord_norm = -0.5 * std::log(2.0 * kPi) - 0.5 * v;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double dev = std::abs(x[i] - mu);
      // exp(2 log|dev| - v) stays NaN-free when dev == 0 and e^{-v} overflows.
      const double quad = dev == 0.0 ? 0.0 : 0.5 * std::exp(2.0 * std::log(dev) - v);
      lp += per_coord_norm - quad;
    }
    return std::isnan(lp) ? kNegInf : lp;
  });
}

LogKernel make_hybrid_rosenbrock(const ParamMap& p) {
  require_positive(p, "b", "hybrid_rosenbrock");
  const double a = p.at("a");
  const double b = p.at("b");
  const double norm = -0.5 * std::log(kPi) + 0.5 * std::log(b / kPi);
  return LogKernel("hybrid_rosenbrock", 2, p, [a, b, norm](std::span<const double> x) {
    const double r = x[1] - x[0] * x[0];
    return norm - (x[0] - a) * (x[0] - a) - b * r * r;
  });
}

LogKernel make_squiggle(const ParamMap& p) {
  const std::size_t d = dim_param(p, "squiggle");
  if (d < 2) throw InvalidArgument("squiggle: 'dim' must be at least 2");
  const double a = p.at("a");
  return LogKernel("squiggle", d, p, [d, a](std::span<const double> x) {
    constexpr double var1 = 5.0;
    constexpr double var_rest = 0.5;
    double lp = -0.5 * std::log(2.0 * kPi * var1) - x[0] * x[0] / (2.0 * var1);
    const double shear = std::sin(a * x[0]);
    for (std::size_t i = 1; i < d; ++i) {
      const double z = x[i] + shear;
      lp += -0.5 * std::log(2.0 * kPi * var_rest) - z * z / (2.0 * var_rest);
    }
    return lp;
  });
}

LogKernel make_allen_cahn(const ParamMap& p) {
  const std::size_t d = dim_param(p, "allen_cahn");
  require_positive(p, "beta", "allen_cahn");
  require_positive(p, "a", "allen_cahn");
  const double beta = p.at("beta");
  const double a = p.at("a");
  const double b = 1.0 / a;
  const double ds = 1.0 / static_cast<double>(d);
  return LogKernel("allen_cahn", d, p, [d, beta, a, b, ds](std::span<const double> x) {
    double grad = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      grad += (x[i] - prev) * (x[i] - prev);
      prev = x[i];
    }
    grad += prev * prev;  // x_{D+1} = 0
    double well = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double w = 1.0 - x[i] * x[i];
      well += w * w;
    }
    return -beta * (a / (2.0 * ds) * grad + b * ds / 4.0 * well);
  });
}

LogKernel make_gaussian(const ParamMap& p) {
  const std::size_t m = dim_param(p, "gaussian");
  require_positive(p, "sd", "gaussian");
  const double sd = p.at("sd");
  return LogKernel("gaussian", m, p, [m, sd](std::span<const double> x) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) sq += x[i] * x[i];
    return -0.5 * sq / (sd * sd);
  });
}

LogKernel make_uniform(const ParamMap& p) {
  const std::size_t m = dim_param(p, "uniform");
  const double lo = p.at("lo");
  const double hi = p.at("hi");
  if (!(lo < hi)) throw InvalidArgument("uniform: need lo < hi");
  return LogKernel("uniform", m, p, [m, lo, hi](std::span<const double> x) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!(x[i] > lo && x[i] < hi)) return kNegInf;
    }
    return 0.0;
  });
}

}  // namespace

const std::vector<KernelInfo>& kernel_registry() {
  static const std::vector<KernelInfo> registry = {
      {"beta_mixture", 1, false, {}, "0.3/0.4/0.3 mixture of shifted, half-scaled Beta densities"},
      {"rosenbrock", 2, false, {}, "banana kernel exp(-x1^2/10 - x2^2/10 - 2(x2 - x1^2)^2)"},
      {"ackley",
       2,
       false,
       {{"dim", 2, "dimension m"},
        {"temp", 1, "temperature dividing the Ackley function"},
        {"L", 5, "half-width of the box support"}},
       "exp(-f_ackley(x)/temp) on [-L, L]^m, a=20, b=0.2, c=2pi"},
      {"radial_exp", 10, false, {{"dim", 10, "dimension m"}}, "exp(-||x||) on R^m"},
      {"lasso_bridge",
       0,
       true,
       {{"lambda", 0.1, "penalty weight"},
        {"alpha", 1, "penalty exponent (1 = lasso)"},
        {"n_scaled", 0, "1 multiplies the whole exponent by N"}},
       "exp(-[(1/2N) RSS + lambda sum_j |beta_j|^alpha]), intercept unpenalised"},
      {"funnel",
       10,
       false,
       {{"dim", 10, "dimension D; the last coordinate is the funnel variable"},
        {"sigma", 3, "sd of the funnel variable"},
        {"mu", 0, "mean of the remaining coordinates"}},
       "Neal's funnel"},
      {"hybrid_rosenbrock",
       2,
       false,
       {{"a", 1, "centre of x1"}, {"b", 100, "ridge stiffness"}},
       "N(x1; a, 1/2) N(x2; x1^2, 1/(2b))"},
      {"squiggle",
       3,
       false,
       {{"dim", 3, "dimension D"}, {"a", 1.5, "frequency of the sine shear"}},
       "Gaussian diag(5, 1/2, ...) under z_{2:D} = x_{2:D} + sin(a x1)"},
      {"allen_cahn",
       10,
       false,
       {{"dim", 10, "dimension D"}, {"beta", 1, "inverse temperature"}, {"a", 0.1, "gradient weight (b = 1/a)"}},
       "discretised Allen-Cahn field with zero boundary values"},
  };
  return registry;
}

const std::vector<KernelInfo>& auxiliary_kernels() {
  static const std::vector<KernelInfo> aux = {
      {"gaussian", 1, false, {{"dim", 1, "dimension m"}, {"sd", 1, "per-coordinate sd"}},
       "isotropic Gaussian exp(-||x||^2 / (2 sd^2))"},
      {"uniform", 1, false, {{"dim", 1, "dimension m"}, {"lo", 0, "lower edge"}, {"hi", 1, "upper edge"}},
       "indicator of the open box (lo, hi)^m"},
  };
  return aux;
}

const KernelInfo* find_kernel_info(const std::string& name) {
  for (const auto* list : {&kernel_registry(), &auxiliary_kernels()}) {
    for (const auto& info : *list) {
      if (info.name == name) return &info;
    }
  }
  return nullptr;
}

ParamMap resolved_params(const std::string& name, const ParamMap& params) {
  const KernelInfo* info = find_kernel_info(name);
  if (info == nullptr) throw InvalidArgument("unknown kernel '" + name + "'");
  ParamMap out;
  for (const auto& spec : info->params) out[spec.name] = spec.default_value;
  for (const auto& [key, value] : params) {
    if (!out.contains(key)) {
      throw InvalidArgument("kernel '" + name + "' has no parameter '" + key + "'");
    }
    if (std::isnan(value)) throw InvalidArgument("kernel '" + name + "': parameter '" + key + "' is NaN");
    out[key] = value;
  }
  return out;
}

LogKernel make_kernel(const std::string& name, const ParamMap& params, const RegressionData* data) {
  const ParamMap p = resolved_params(name, params);
  if (name == "beta_mixture") return make_beta_mixture(p);
  if (name == "rosenbrock") return make_rosenbrock(p);
  if (name == "ackley") return make_ackley(p);
  if (name == "radial_exp") return make_radial_exp(p);
  if (name == "lasso_bridge") return make_lasso_bridge(p, data);
  if (name == "funnel") return make_funnel(p);
  if (name == "hybrid_rosenbrock") return make_hybrid_rosenbrock(p);
  if (name == "squiggle") return make_squiggle(p);
  if (name == "allen_cahn") return make_allen_cahn(p);
  if (name == "gaussian") return make_gaussian(p);
  if (name == "uniform") return make_uniform(p);
  throw InvalidArgument("unknown kernel '" + name + "'");
}

}  // namespace asg
