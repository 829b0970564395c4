#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace curricomp {

/// The six trainable basic emotions. Neutral exists only at ingestion time
/// (tracked as a separate indicator on Sample) and never reaches training.
enum class BasicClass : int {
  Anger = 0,
  Disgust = 1,
  Fear = 2,
  Happiness = 3,
  Sadness = 4,
  Surprise = 5,
};

inline constexpr std::size_t kNumBasicClasses = 6;
inline constexpr std::size_t kNumCompoundClasses = 7;

const std::string& basic_class_name(BasicClass c);

/// Per-class soft multi-label in [0,1], indexed by BasicClass.
using LabelVector = std::array<double, kNumBasicClasses>;

LabelVector one_hot(BasicClass c);
bool is_one_hot(const LabelVector& y);
/// Index of the largest entry; ties resolve to the lowest index.
std::size_t dominant_class(const LabelVector& y);

struct CompoundEntry {
  std::string name;
  BasicClass first;
  BasicClass second;
};

/// The seven recognizable compound classes, each composed of exactly two
/// basic constituents. Entry order is fixed and doubles as the class index
/// used everywhere (scores, metrics, confusion matrices).
struct CompoundCatalog {
  std::vector<CompoundEntry> entries;

  std::size_t size() const { return entries.size(); }
  const CompoundEntry& operator[](std::size_t i) const { return entries[i]; }
};

const CompoundCatalog& default_catalog();

/// Catalog index whose constituents carry the most summed label mass;
/// ties resolve to the lowest index.
std::size_t compound_truth_index(const LabelVector& y, const CompoundCatalog& catalog);

}  // namespace curricomp
