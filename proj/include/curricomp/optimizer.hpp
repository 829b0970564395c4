#pragma once

#include <cstdint>
#include <vector>

#include "curricomp/model.hpp"

namespace curricomp {

enum class OptimizerKind { Sgd, Adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double momentum = 0.0;  // SGD only
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

/// Throws std::invalid_argument unless learning_rate > 0, momentum/betas lie
/// in [0,1) and weight_decay >= 0.
void validate(const OptimizerConfig& cfg);

/// First-order optimizer owning its momentum / moment buffers.
///
/// SGD:  u <- momentum*u + (g + wd*w);  w <- w - lr*u
/// Adam: standard first/second-moment update with bias correction; weight
/// decay enters the gradient before the moments (classic L2 coupling).
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, const ModelState& shape_like);

  /// Applies one update; the step index t (1-based, required for Adam bias
  /// correction) advances automatically.
  void step(ModelState& state, const Gradients& grads);

  /// Same, with an explicit step index t >= 1.
  void step(ModelState& state, const Gradients& grads, std::int64_t t);

  /// Clears momentum/moment buffers and the step counter.
  void reset();

  std::int64_t steps_taken() const { return t_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  std::int64_t t_ = 0;
  std::vector<std::vector<double>> m_w_, m_b_;  // momentum / first moment
  std::vector<std::vector<double>> v_w_, v_b_;  // second moment (Adam)
};

}  // namespace curricomp
