#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace asg {

using ParamMap = std::map<std::string, double>;

/// log K(x) for an unnormalized kernel on R^m. Returns -inf outside the
/// support and never NaN on finite input.
using LogEvalFn = std::function<double(std::span<const double>)>;

/// Builds a specialised evaluator z -> log K(point with [coord] = z).
/// Kernels whose log-density has cheap coordinate-wise sufficient statistics
/// (the regression kernels) provide one; it must agree with the generic
/// path up to floating-point reassociation.
using ConditionalFactory =
    std::function<std::function<double(double)>(std::size_t coord, std::span<const double> point)>;

class LogKernel {
 public:
  LogKernel(std::string name, std::size_t dim, ParamMap params, LogEvalFn log_eval,
            ConditionalFactory fast_conditional = {});

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const ParamMap& params() const { return params_; }

  double log_eval(std::span<const double> x) const { return (*log_eval_)(x); }
  double operator()(std::span<const double> x) const { return (*log_eval_)(x); }

  bool has_fast_conditional() const { return static_cast<bool>(*fast_conditional_); }
  const ConditionalFactory& fast_conditional() const { return *fast_conditional_; }

 private:
  std::string name_;
  std::size_t dim_;
  ParamMap params_;
  // Shared so that copies of a kernel are cheap and stay immutable.
  std::shared_ptr<const LogEvalFn> log_eval_;
  std::shared_ptr<const ConditionalFactory> fast_conditional_;
};

/// g(z) = log K(x_1, ..., x_{j-1}, z, x_{j+1}, ..., x_m).
///
/// The generic path reassembles the point and calls the kernel, so it is
/// bit-identical to LogKernel::log_eval. The fast path is used only when
/// requested and the kernel supplies one.
class Conditional1D {
 public:
  enum class Path { generic, fast_if_available };

  /// `fixed` holds the m-1 coordinates other than `coord`, in order.
  Conditional1D(const LogKernel& kernel, std::size_t coord, std::span<const double> fixed,
                Path path = Path::generic);

  /// Takes a full m-vector; its entry at `coord` is ignored.
  static Conditional1D at_point(const LogKernel& kernel, std::size_t coord,
                                std::span<const double> point, Path path = Path::generic);

  double operator()(double z) const;

  std::size_t coord() const { return coord_; }
  const LogKernel& kernel() const { return *kernel_; }
  bool uses_fast_path() const { return static_cast<bool>(fast_); }

 private:
  struct FromPoint {};
  Conditional1D(FromPoint, const LogKernel& kernel, std::size_t coord,
                std::span<const double> point, Path path);

  const LogKernel* kernel_;
  std::size_t coord_;
  std::vector<double> point_;
  std::function<double(double)> fast_;
};

}  // namespace asg
