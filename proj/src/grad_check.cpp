#include "curricomp/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "curricomp/rng.hpp"

namespace curricomp {

namespace {

// Relative error with a small absolute floor so that near-zero gradient
// pairs are judged by absolute difference instead of blowing up.
constexpr double kDenomFloor = 1e-4;

struct ParamRef {
  std::size_t layer;
  bool is_weight;
  std::size_t idx;
};

std::vector<ParamRef> flatten(const ModelState& state) {
  std::vector<ParamRef> refs;
  for (std::size_t layer = 0; layer < state.dense.size(); ++layer) {
    for (std::size_t i = 0; i < state.dense[layer].w.size(); ++i) {
      refs.push_back({layer, true, i});
    }
    for (std::size_t i = 0; i < state.dense[layer].b.size(); ++i) {
      refs.push_back({layer, false, i});
    }
  }
  return refs;
}

double& param_at(ModelState& state, const ParamRef& ref) {
  return ref.is_weight ? state.dense[ref.layer].w[ref.idx] : state.dense[ref.layer].b[ref.idx];
}

double param_at(const ModelState& state, const ParamRef& ref) {
  return ref.is_weight ? state.dense[ref.layer].w[ref.idx] : state.dense[ref.layer].b[ref.idx];
}

}  // namespace

GradCheckReport compare_to_finite_differences(const ModelSpec& spec, const ModelState& state,
                                              const Tensor& batch, const Tensor& labels,
                                              const Gradients& analytic, double eps, double tol,
                                              std::size_t max_params, std::uint64_t subset_seed) {
  if (!(eps > 0.0) || eps > 1e-2) {
    throw std::invalid_argument("grad_check: eps must lie in (0, 1e-2]");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("grad_check: tol must be > 0");
  }

  std::vector<ParamRef> refs = flatten(state);
  std::vector<std::size_t> order(refs.size());
  std::iota(order.begin(), order.end(), 0);
  if (max_params > 0 && refs.size() > max_params) {
    RngStream rng = RngStream(subset_seed).substream("grad-check-subset");
    rng.shuffle(order);
    order.resize(max_params);
    std::sort(order.begin(), order.end());
  }

  ModelState probe = state;
  GradCheckReport report;
  report.params_checked = order.size();

  for (const std::size_t flat : order) {
    const ParamRef& ref = refs[flat];
    const double saved = param_at(probe, ref);

    param_at(probe, ref) = saved + eps;
    const double loss_plus = model_loss(spec, probe, batch, labels);
    param_at(probe, ref) = saved - eps;
    const double loss_minus = model_loss(spec, probe, batch, labels);
    param_at(probe, ref) = saved;

    const double fd = (loss_plus - loss_minus) / (2.0 * eps);
    const double an = param_at(analytic, ref);
    const double denom = std::max({std::abs(fd), std::abs(an), kDenomFloor});
    const double rel = std::abs(fd - an) / denom;
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_param = flat;
      report.worst_location = "dense " + std::to_string(ref.layer) +
                              (ref.is_weight ? " weight [" : " bias [") +
                              std::to_string(ref.idx) + "]";
    }
  }

  report.pass = report.max_rel_err <= tol;
  return report;
}

GradCheckReport grad_check(const ModelSpec& spec, const ModelState& state, const Tensor& batch,
                           const Tensor& labels, double eps, double tol, std::size_t max_params,
                           std::uint64_t subset_seed) {
  const Gradients analytic = backward(spec, state, batch, labels);
  return compare_to_finite_differences(spec, state, batch, labels, analytic, eps, tol, max_params,
                                       subset_seed);
}

}  // namespace curricomp
