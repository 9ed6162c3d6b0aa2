#pragma once

#include <string>
#include <vector>

#include "asg/kernel.hpp"
#include "asg/regression_data.hpp"

namespace asg {

struct ParamSpec {
  std::string name;
  double default_value;
  std::string description;
};

struct KernelInfo {
  std::string name;
  /// 0 when the dimension comes from regression data.
  std::size_t default_dim;
  bool needs_data;
  std::vector<ParamSpec> params;
  std::string description;
};

/// The nine benchmark kernels, in a stable order.
const std::vector<KernelInfo>& kernel_registry();

/// Extra kernels used by tests and the `support` subcommand (standard
/// normal product, indicator of a box). Not part of the benchmark registry.
const std::vector<KernelInfo>& auxiliary_kernels();

/// Looks a kernel up by name in either list; nullptr if unknown.
const KernelInfo* find_kernel_info(const std::string& name);

/// Builds a kernel with defaults filled in for every parameter not given.
/// Throws InvalidArgument for an unknown name, unknown parameter, invalid
/// parameter value, or a regression kernel without data.
LogKernel make_kernel(const std::string& name, const ParamMap& params = {},
                      const RegressionData* data = nullptr);

/// Parameters after defaults are applied (what the kernel actually uses).
ParamMap resolved_params(const std::string& name, const ParamMap& params);

}  // namespace asg
