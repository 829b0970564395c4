#include "curricomp/labels.hpp"

namespace curricomp {

const std::string& basic_class_name(BasicClass c) {
  static const std::array<std::string, kNumBasicClasses> names = {
      "anger", "disgust", "fear", "happiness", "sadness", "surprise"};
  return names[static_cast<std::size_t>(c)];
}

LabelVector one_hot(BasicClass c) {
  LabelVector y{};
  y[static_cast<std::size_t>(c)] = 1.0;
  return y;
}

bool is_one_hot(const LabelVector& y) {
  int ones = 0;
  for (const double v : y) {
    if (v == 1.0) {
      ++ones;
    } else if (v != 0.0) {
      return false;
    }
  }
  return ones == 1;
}

std::size_t dominant_class(const LabelVector& y) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] > y[best]) best = i;
  }
  return best;
}

const CompoundCatalog& default_catalog() {
  static const CompoundCatalog catalog{{
      {"Fearfully Surprised", BasicClass::Fear, BasicClass::Surprise},
      {"Happily Surprised", BasicClass::Happiness, BasicClass::Surprise},
      {"Sadly Surprised", BasicClass::Sadness, BasicClass::Surprise},
      {"Disgustedly Surprised", BasicClass::Disgust, BasicClass::Surprise},
      {"Angrily Surprised", BasicClass::Anger, BasicClass::Surprise},
      {"Sadly Fearful", BasicClass::Sadness, BasicClass::Fear},
      {"Sadly Angry", BasicClass::Sadness, BasicClass::Anger},
  }};
  return catalog;
}

std::size_t compound_truth_index(const LabelVector& y, const CompoundCatalog& catalog) {
  std::size_t best = 0;
  double best_mass = -1.0;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const CompoundEntry& entry = catalog[k];
    const double mass = y[static_cast<std::size_t>(entry.first)] +
                        y[static_cast<std::size_t>(entry.second)];
    if (mass > best_mass) {
      best_mass = mass;
      best = k;
    }
  }
  return best;
}

}  // namespace curricomp
