#pragma once

#include "curricomp/labels.hpp"
#include "curricomp/tensor.hpp"

namespace curricomp {

enum class SampleSource { Basic, NaturalCompound, SynthesizedCompound };

/// One training/evaluation item: an HxWxC image in [0,1], its soft
/// multi-label over the six basic classes, the neutral indicator carried
/// from ingestion, and a provenance tag.
struct Sample {
  Tensor image;  // {H, W, C}, pixel values in [0,1]
  LabelVector label{};
  double neutral = 0.0;
  SampleSource source = SampleSource::Basic;
};

inline const char* sample_source_name(SampleSource s) {
  switch (s) {
    case SampleSource::Basic: return "basic";
    case SampleSource::NaturalCompound: return "natural_compound";
    case SampleSource::SynthesizedCompound: return "synthesized_compound";
  }
  return "?";
}

}  // namespace curricomp
