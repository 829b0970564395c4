#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curricomp/tensor.hpp"

namespace curricomp {

enum class LayerKind { Dense, ReLU, Sigmoid };

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  std::size_t units = 0;  // Dense only
  bool operator==(const LayerSpec&) const = default;
};

/// Feed-forward classifier architecture operating on flattened images.
struct ModelSpec {
  std::size_t input_height = 32;
  std::size_t input_width = 32;
  std::size_t input_channels = 3;
  std::vector<LayerSpec> layers;
  std::size_t num_classes = 6;

  std::size_t input_dim() const { return input_height * input_width * input_channels; }
  bool operator==(const ModelSpec&) const = default;
};

/// Dense(h0)-ReLU-...-Dense(num_classes)-Sigmoid over the given hidden sizes.
ModelSpec make_mlp_spec(std::size_t height, std::size_t width, std::size_t channels,
                        const std::vector<std::size_t>& hidden_units, std::size_t num_classes = 6);

/// Enforces the classifier invariants required by the training pipeline:
/// at least one hidden Dense layer, and the network must end in
/// Dense(num_classes) followed by Sigmoid. Throws std::invalid_argument.
void validate_for_training(const ModelSpec& spec);

struct DenseParams {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> w;  // row-major in x out
  std::vector<double> b;  // out
};

/// Learnable parameters, one entry per Dense layer in spec order.
struct ModelState {
  std::vector<DenseParams> dense;
};

/// Gradients share the exact shapes of the parameters they refer to.
using Gradients = ModelState;

/// Glorot-style init: every weight and bias of a Dense layer is drawn
/// uniformly from +/- sqrt(6 / (fan_in + fan_out)), seeded.
ModelState init_state(const ModelSpec& spec, std::uint64_t seed);

std::size_t param_count(const ModelState& state);

bool states_equal(const ModelState& a, const ModelState& b);

/// Numerically stable logistic function, output clamped to stay strictly
/// inside (0, 1) even when the input saturates in double precision.
double sigmoid(double z);

/// Runs the network on a batch ({B,H,W,C} or {B,D}) and returns {B,num_classes}
/// probabilities. Pure in (spec, state, batch); throws std::invalid_argument on
/// shape mismatch and std::runtime_error on non-finite intermediates.
Tensor forward(const ModelSpec& spec, const ModelState& state, const Tensor& batch);

/// Exact analytic gradient of the mean multi-label BCE loss over the batch
/// with respect to every parameter. Labels are {B,num_classes} with entries
/// in [0,1]. When loss_out is non-null it receives the batch loss, sharing
/// the forward pass with the gradient computation.
Gradients backward(const ModelSpec& spec, const ModelState& state, const Tensor& batch,
                   const Tensor& labels, double* loss_out = nullptr);

/// Mean multi-label BCE of forward(spec,state,batch) against labels; the
/// scalar function finite differences are taken of in grad_check.
double model_loss(const ModelSpec& spec, const ModelState& state, const Tensor& batch,
                  const Tensor& labels);

std::string layer_kind_name(LayerKind kind);

}  // namespace curricomp
