#pragma once

#include "curricomp/tensor.hpp"

namespace curricomp {

/// Probability clamp applied inside the log terms of the BCE.
inline constexpr double kProbClamp = 1e-7;

/// Mean over samples of the summed per-class binary cross-entropy:
///   -(1/N) sum_i sum_c [ y_ic log p_ic + (1 - y_ic) log(1 - p_ic) ].
///
/// `p` and `y` are both {B,C}; p must lie in [0,1] (probabilities), y in
/// [0,1] (soft labels permitted). Computed with log1p and a 1e-7 clamp so
/// saturated probabilities cannot produce infinities.
double bce_loss(const Tensor& p, const Tensor& y);

}  // namespace curricomp
