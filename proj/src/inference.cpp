#include "curricomp/inference.hpp"

#include <stdexcept>

namespace curricomp {

CompoundDecision constrain_to_compound(const std::array<double, kNumBasicClasses>& p,
                                       const CompoundCatalog& catalog) {
  for (const double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("constrain_to_compound: probabilities must lie in [0,1]");
    }
  }
  if (catalog.size() != kNumCompoundClasses) {
    throw std::invalid_argument("constrain_to_compound: catalog must have 7 entries");
  }

  CompoundDecision decision;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    decision.scores[k] = p[static_cast<std::size_t>(catalog[k].first)] +
                         p[static_cast<std::size_t>(catalog[k].second)];
  }
  for (std::size_t k = 1; k < decision.scores.size(); ++k) {
    if (decision.scores[k] > decision.scores[decision.class_index]) {
      decision.class_index = k;
    }
  }
  return decision;
}

std::array<double, kNumBasicClasses> predict_basic(const ModelSpec& spec, const ModelState& state,
                                                   const Tensor& image) {
  if (image.rank() != 3) {
    throw std::invalid_argument("predict_basic: image must be HxWxC");
  }
  Tensor batch{{1, image.dim(0), image.dim(1), image.dim(2)}, image.data};
  const Tensor out = forward(spec, state, batch);
  if (out.dim(1) != kNumBasicClasses) {
    throw std::invalid_argument("predict_basic: model does not output 6 classes");
  }
  std::array<double, kNumBasicClasses> p{};
  for (std::size_t i = 0; i < kNumBasicClasses; ++i) p[i] = out.data[i];
  return p;
}

}  // namespace curricomp
