#include "curricomp/tensor.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace curricomp {

namespace {
std::size_t shape_numel(const std::vector<std::size_t>& s) {
  std::size_t n = 1;
  for (const std::size_t d : s) n *= d;
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  if (shape_numel(shape) != data.size()) {
    throw std::invalid_argument("tensor: shape " + shape_to_string(shape) + " does not match " +
                                std::to_string(data.size()) + " elements");
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> s) {
  const std::size_t n = shape_numel(s);
  return Tensor{std::move(s), std::vector<double>(n, 0.0)};
}

Tensor Tensor::full(std::vector<std::size_t> s, double value) {
  const std::size_t n = shape_numel(s);
  return Tensor{std::move(s), std::vector<double>(n, value)};
}

bool Tensor::all_finite() const {
  for (const double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::require_finite(const std::string& context) const {
  if (!all_finite()) {
    throw std::runtime_error("numeric error: non-finite value in " + context);
  }
}

std::string shape_to_string(const std::vector<std::size_t>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  out += "]";
  return out;
}

}  // namespace curricomp
