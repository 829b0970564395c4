#include "curricomp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curricomp {

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) {
    throw std::invalid_argument("optimizer: learning_rate must be > 0");
  }
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
    throw std::invalid_argument("optimizer: momentum must lie in [0,1)");
  }
  if (cfg.beta1 < 0.0 || cfg.beta1 >= 1.0 || cfg.beta2 < 0.0 || cfg.beta2 >= 1.0) {
    throw std::invalid_argument("optimizer: betas must lie in [0,1)");
  }
  if (cfg.weight_decay < 0.0) {
    throw std::invalid_argument("optimizer: weight_decay must be >= 0");
  }
  if (!(cfg.eps > 0.0)) {
    throw std::invalid_argument("optimizer: eps must be > 0");
  }
}

Optimizer::Optimizer(const OptimizerConfig& cfg, const ModelState& shape_like) : cfg_(cfg) {
  validate(cfg_);
  for (const DenseParams& p : shape_like.dense) {
    m_w_.emplace_back(p.w.size(), 0.0);
    m_b_.emplace_back(p.b.size(), 0.0);
    v_w_.emplace_back(p.w.size(), 0.0);
    v_b_.emplace_back(p.b.size(), 0.0);
  }
}

void Optimizer::step(ModelState& state, const Gradients& grads) { step(state, grads, t_ + 1); }

void Optimizer::step(ModelState& state, const Gradients& grads, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("optimizer: step index t must be >= 1");
  if (state.dense.size() != grads.dense.size() || state.dense.size() != m_w_.size()) {
    throw std::invalid_argument("optimizer: state/gradient layer count mismatch");
  }
  t_ = t;

  const double lr = cfg_.learning_rate;
  const double wd = cfg_.weight_decay;

  auto update = [&](std::vector<double>& w, const std::vector<double>& g,
                    std::vector<double>& m, std::vector<double>& v) {
    if (w.size() != g.size()) {
      throw std::invalid_argument("optimizer: parameter/gradient size mismatch");
    }
    switch (cfg_.kind) {
      case OptimizerKind::Sgd: {
        const double mu = cfg_.momentum;
        for (std::size_t i = 0; i < w.size(); ++i) {
          const double ge = g[i] + wd * w[i];
          if (mu > 0.0) {
            m[i] = mu * m[i] + ge;
            w[i] -= lr * m[i];
          } else {
            w[i] -= lr * ge;
          }
        }
        break;
      }
      case OptimizerKind::Adam: {
        const double b1 = cfg_.beta1;
        const double b2 = cfg_.beta2;
        const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
        const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
        for (std::size_t i = 0; i < w.size(); ++i) {
          const double ge = g[i] + wd * w[i];
          m[i] = b1 * m[i] + (1.0 - b1) * ge;
          v[i] = b2 * v[i] + (1.0 - b2) * ge * ge;
          const double m_hat = m[i] / corr1;
          const double v_hat = v[i] / corr2;
          w[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
        }
        break;
      }
    }
  };

  for (std::size_t layer = 0; layer < state.dense.size(); ++layer) {
    update(state.dense[layer].w, grads.dense[layer].w, m_w_[layer], v_w_[layer]);
    update(state.dense[layer].b, grads.dense[layer].b, m_b_[layer], v_b_[layer]);
  }
}

void Optimizer::reset() {
  t_ = 0;
  for (auto& v : m_w_) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : m_b_) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : v_w_) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : v_b_) std::fill(v.begin(), v.end(), 0.0);
}

}  // namespace curricomp
