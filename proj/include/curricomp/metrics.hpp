#pragma once

#include <array>
#include <string>
#include <vector>

#include "curricomp/inference.hpp"
#include "curricomp/labels.hpp"
#include "curricomp/sample.hpp"

namespace curricomp {

/// Per-class and macro diagnostics over the 7 compound classes. F1 uses the
/// 0/0 -> 0 convention; macro F1 always divides by 7, so zero-support
/// classes drag the average down and are flagged.
struct Metrics {
  std::array<double, kNumCompoundClasses> per_class_f1{};
  std::array<double, kNumCompoundClasses> precision{};
  std::array<double, kNumCompoundClasses> recall{};
  std::array<int, kNumCompoundClasses> support{};
  std::array<bool, kNumCompoundClasses> zero_support{};
  std::array<std::array<int, kNumCompoundClasses>, kNumCompoundClasses> confusion{};  // [true][pred]
  double macro_f1 = 0.0;
};

/// Confusion-matrix reduction of parallel truth/prediction index lists.
Metrics compute_metrics(const std::vector<std::size_t>& truth,
                        const std::vector<std::size_t>& predicted);

/// An evaluation item: an image plus its ground-truth compound class index.
struct EvalSample {
  Sample sample;
  std::size_t compound_class = 0;
};

/// Scores every sample with catalog-constrained inference and reduces to
/// Metrics. Pure per sample; `threads` > 1 parallelizes the scoring without
/// changing the result. Throws on an empty set.
Metrics evaluate(const ModelSpec& spec, const ModelState& state,
                 const std::vector<EvalSample>& eval_set, const CompoundCatalog& catalog,
                 int threads = 1);

std::string metrics_to_json(const Metrics& metrics, const CompoundCatalog& catalog);

}  // namespace curricomp
