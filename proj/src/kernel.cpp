#include "asg/kernel.hpp"

#include <array>
#include <cmath>

#include "asg/error.hpp"

namespace asg {

LogKernel::LogKernel(std::string name, std::size_t dim, ParamMap params, LogEvalFn log_eval,
                     ConditionalFactory fast_conditional)
    : name_(std::move(name)),
      dim_(dim),
      params_(std::move(params)),
      log_eval_(std::make_shared<const LogEvalFn>(std::move(log_eval))),
      fast_conditional_(std::make_shared<const ConditionalFactory>(std::move(fast_conditional))) {
  if (dim_ == 0) throw InvalidArgument("LogKernel: dimension must be positive");
  if (!*log_eval_) throw InvalidArgument("LogKernel: empty evaluator");
}

Conditional1D::Conditional1D(const LogKernel& kernel, std::size_t coord,
                             std::span<const double> fixed, Path path)
    : kernel_(&kernel), coord_(coord) {
  const std::size_t m = kernel.dim();
  if (coord >= m) throw InvalidArgument("conditional_1d: coordinate index out of range");
  if (fixed.size() + 1 != m) {
    throw InvalidArgument("conditional_1d: expected " + std::to_string(m - 1) + " fixed values");
  }
  point_.resize(m, 0.0);
  for (std::size_t i = 0, k = 0; i < m; ++i) {
    if (i == coord) continue;
    if (!std::isfinite(fixed[k])) throw InvalidArgument("conditional_1d: non-finite fixed value");
    point_[i] = fixed[k++];
  }
  if (path == Path::fast_if_available && kernel.has_fast_conditional()) {
    fast_ = kernel.fast_conditional()(coord_, point_);
  }
}

Conditional1D::Conditional1D(FromPoint, const LogKernel& kernel, std::size_t coord,
                             std::span<const double> point, Path path)
    : kernel_(&kernel), coord_(coord) {
  const std::size_t m = kernel.dim();
  if (coord >= m) throw InvalidArgument("conditional_1d: coordinate index out of range");
  if (point.size() != m) throw InvalidArgument("conditional_1d: point has wrong dimension");
  point_.assign(point.begin(), point.end());
  point_[coord] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i != coord && !std::isfinite(point_[i])) {
      throw InvalidArgument("conditional_1d: non-finite fixed value");
    }
  }
  if (path == Path::fast_if_available && kernel.has_fast_conditional()) {
    fast_ = kernel.fast_conditional()(coord_, point_);
  }
}

Conditional1D Conditional1D::at_point(const LogKernel& kernel, std::size_t coord,
                                      std::span<const double> point, Path path) {
  return Conditional1D(FromPoint{}, kernel, coord, point, path);
}

double Conditional1D::operator()(double z) const {
  if (fast_) return fast_(z);
  const std::size_t m = point_.size();
  constexpr std::size_t kStack = 64;
  if (m <= kStack) {
    std::array<double, kStack> buf;
    std::copy(point_.begin(), point_.end(), buf.begin());
    buf[coord_] = z;
    return kernel_->log_eval(std::span<const double>(buf.data(), m));
  }
  std::vector<double> buf(point_);
  buf[coord_] = z;
  return kernel_->log_eval(buf);
}

}  // namespace asg
