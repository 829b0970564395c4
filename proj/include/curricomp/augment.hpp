#pragma once

#include "curricomp/rng.hpp"
#include "curricomp/sample.hpp"

namespace curricomp {

/// How labels combine when two samples are mixed.
///   Proportional: label = lambda*y_a + (1-lambda)*y_b
///   Union:        each source label binarized at 0.5, then elementwise max
enum class MixMode { Proportional, Union };

const char* mix_mode_name(MixMode mode);
MixMode mix_mode_from_string(const std::string& name);

/// Convex image blend: image = lambda*img_a + (1-lambda)*img_b, label per
/// MixMode. lambda == 1 returns sample a verbatim. The result is tagged
/// SynthesizedCompound when the two inputs' dominant classes differ.
Sample mixup(const Sample& a, const Sample& b, double lambda, MixMode mode);

struct PatchRect {
  std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
  std::size_t area() const { return (x1 - x0) * (y1 - y0); }
};

struct CutmixResult {
  Sample sample;
  PatchRect patch;
  double lambda_eff = 1.0;  // 1 - patch_area / (W*H), recomputed after clipping
};

/// Copies a W*sqrt(1-lambda) x H*sqrt(1-lambda) rectangle of img_b onto
/// img_a at the given patch center (clipped to bounds). No pixel blending;
/// the proportional label uses the recomputed effective lambda.
CutmixResult cutmix_at(const Sample& a, const Sample& b, double lambda, std::size_t center_x,
                       std::size_t center_y, MixMode mode);

/// cutmix_at with a uniformly drawn patch center.
CutmixResult cutmix(const Sample& a, const Sample& b, double lambda, RngStream& rng, MixMode mode);

/// Sets one hole_size x hole_size square to mid-gray (0.5). The square is
/// placed uniformly among fully-inside positions, so it never clips.
Tensor cutout(const Tensor& image, RngStream& rng, std::size_t hole_size);

Tensor flip_horizontal(const Tensor& image);

struct AugmentConfig {
  double flip_p = 0.5;
  double jitter_strength = 0.1;  // per-channel multiplicative, uniform in [1-s, 1+s]
  double crop_scale = 0.9;       // area fraction kept by the random crop
  std::size_t cutout_size = 8;   // 0 disables; applied by the training loop
};

/// Single-expression-stage augmentation: horizontal flip with probability
/// flip_p, per-channel multiplicative color jitter clipped to [0,1], then a
/// random crop of crop_scale area resized back to the input size. The label
/// is untouched.
Sample basic_augment(const Sample& sample, RngStream& rng, const AugmentConfig& config);

}  // namespace curricomp
