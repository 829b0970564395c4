#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace curricomp {

/// Dense row-major tensor of doubles. Invariant: product(shape) == data.size().
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d);

  static Tensor zeros(std::vector<std::size_t> s);
  static Tensor full(std::vector<std::size_t> s, double value);

  std::size_t numel() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t dim(std::size_t i) const { return shape[i]; }
  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  // Rank-2 accessors (row, col).
  double& at2(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
  double at2(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

  // Rank-3 accessors (y, x, channel) for images stored H x W x C.
  double& at3(std::size_t y, std::size_t x, std::size_t c) {
    return data[(y * shape[1] + x) * shape[2] + c];
  }
  double at3(std::size_t y, std::size_t x, std::size_t c) const {
    return data[(y * shape[1] + x) * shape[2] + c];
  }

  bool all_finite() const;
  /// Throws std::runtime_error mentioning `context` if any entry is NaN/Inf.
  void require_finite(const std::string& context) const;
};

std::string shape_to_string(const std::vector<std::size_t>& shape);

}  // namespace curricomp
