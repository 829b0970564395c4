#include "curricomp/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace curricomp {

double bce_loss(const Tensor& p, const Tensor& y) {
  if (p.rank() != 2 || !p.same_shape(y)) {
    throw std::invalid_argument("bce_loss: p and y must both be BxC");
  }
  for (const double v : p.data) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::runtime_error("numeric error: bce_loss probability outside [0,1]");
    }
  }
  for (const double v : y.data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("bce_loss: labels must lie in [0,1]");
    }
  }

  const std::size_t rows = p.dim(0);
  if (rows == 0) throw std::invalid_argument("bce_loss: empty batch");

  double total = 0.0;
  for (std::size_t i = 0; i < p.numel(); ++i) {
    const double pi = p.data[i];
    const double yi = y.data[i];
    const double log_p = std::log(std::max(pi, kProbClamp));
    const double log_1mp =
        pi < 1.0 - kProbClamp ? std::log1p(-pi) : std::log(kProbClamp);
    total -= yi * log_p + (1.0 - yi) * log_1mp;
  }
  return total / static_cast<double>(rows);
}

}  // namespace curricomp
