#pragma once

#include <cstdint>
#include <string>

#include "curricomp/model.hpp"

namespace curricomp {

struct GradCheckReport {
  double max_rel_err = 0.0;
  bool pass = false;
  std::size_t params_checked = 0;
  std::size_t worst_param = 0;   // flat parameter index
  std::string worst_location;    // "dense 1 weight [12]" style
};

/// Compares an externally supplied analytic gradient against central finite
/// differences of the model's BCE loss, parameter by parameter. Checks every
/// parameter unless max_params > 0, in which case a seeded random subset of
/// that size is used. Exposed separately from grad_check so tests can feed
/// deliberately broken gradients through the same comparison path.
GradCheckReport compare_to_finite_differences(const ModelSpec& spec, const ModelState& state,
                                              const Tensor& batch, const Tensor& labels,
                                              const Gradients& analytic, double eps, double tol,
                                              std::size_t max_params = 0,
                                              std::uint64_t subset_seed = 0);

/// Runs backward() and verifies it against central differences.
/// Preconditions: eps in (0, 1e-2]. All arithmetic is double precision.
GradCheckReport grad_check(const ModelSpec& spec, const ModelState& state, const Tensor& batch,
                           const Tensor& labels, double eps, double tol,
                           std::size_t max_params = 0, std::uint64_t subset_seed = 0);

}  // namespace curricomp
