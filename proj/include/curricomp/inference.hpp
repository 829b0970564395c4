#pragma once

#include <array>

#include "curricomp/labels.hpp"
#include "curricomp/model.hpp"

namespace curricomp {

/// One summed score per catalog entry, each in (0,2).
using CompoundScoreVector = std::array<double, kNumCompoundClasses>;

struct CompoundDecision {
  std::size_t class_index = 0;
  CompoundScoreVector scores{};
};

/// Catalog-constrained inference: score_k = sum of the two constituent
/// basic-class probabilities; the prediction is the argmax over the seven
/// scores, ties broken by the lowest catalog index.
CompoundDecision constrain_to_compound(const std::array<double, kNumBasicClasses>& p,
                                       const CompoundCatalog& catalog);

/// Forward pass over a single {H,W,C} image.
std::array<double, kNumBasicClasses> predict_basic(const ModelSpec& spec, const ModelState& state,
                                                   const Tensor& image);

}  // namespace curricomp
