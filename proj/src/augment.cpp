#include "curricomp/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curricomp/image.hpp"

namespace curricomp {

namespace {

LabelVector combine_labels(const LabelVector& ya, const LabelVector& yb, double lambda,
                           MixMode mode) {
  LabelVector out{};
  switch (mode) {
    case MixMode::Proportional:
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lambda * ya[i] + (1.0 - lambda) * yb[i];
      }
      break;
    case MixMode::Union:
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (ya[i] >= 0.5 || yb[i] >= 0.5) ? 1.0 : 0.0;
      }
      break;
  }
  return out;
}

SampleSource mixed_source(const Sample& a, const Sample& b) {
  return dominant_class(a.label) != dominant_class(b.label) ? SampleSource::SynthesizedCompound
                                                            : a.source;
}

}  // namespace

const char* mix_mode_name(MixMode mode) {
  return mode == MixMode::Proportional ? "proportional" : "union";
}

MixMode mix_mode_from_string(const std::string& name) {
  if (name == "proportional") return MixMode::Proportional;
  if (name == "union") return MixMode::Union;
  throw std::invalid_argument("unknown mix mode '" + name + "'");
}

Sample mixup(const Sample& a, const Sample& b, double lambda, MixMode mode) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("mixup: lambda must lie in [0,1]");
  }
  if (!a.image.same_shape(b.image)) {
    throw std::invalid_argument("mixup: image shapes differ");
  }
  if (lambda == 1.0) return a;

  Sample out;
  out.image = Tensor::zeros(a.image.shape);
  for (std::size_t i = 0; i < out.image.numel(); ++i) {
    out.image.data[i] = lambda * a.image.data[i] + (1.0 - lambda) * b.image.data[i];
  }
  out.label = combine_labels(a.label, b.label, lambda, mode);
  out.neutral = 0.0;
  out.source = mixed_source(a, b);
  return out;
}

CutmixResult cutmix_at(const Sample& a, const Sample& b, double lambda, std::size_t center_x,
                       std::size_t center_y, MixMode mode) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("cutmix: lambda must lie in [0,1]");
  }
  if (!a.image.same_shape(b.image)) {
    throw std::invalid_argument("cutmix: image shapes differ");
  }
  const std::size_t height = a.image.dim(0);
  const std::size_t width = a.image.dim(1);
  const std::size_t channels = a.image.dim(2);

  const double side = std::sqrt(1.0 - lambda);
  const auto cut_w = static_cast<std::size_t>(std::lround(side * static_cast<double>(width)));
  const auto cut_h = static_cast<std::size_t>(std::lround(side * static_cast<double>(height)));

  CutmixResult result;
  if (cut_w == 0 || cut_h == 0) {
    result.sample = a;
    result.lambda_eff = 1.0;
    return result;
  }

  const std::size_t x0 = center_x > cut_w / 2 ? center_x - cut_w / 2 : 0;
  const std::size_t y0 = center_y > cut_h / 2 ? center_y - cut_h / 2 : 0;
  const std::size_t x1 = std::min(width, x0 + cut_w);
  const std::size_t y1 = std::min(height, y0 + cut_h);
  result.patch = {x0, y0, x1, y1};

  const double patch_area = static_cast<double>(result.patch.area());
  result.lambda_eff = 1.0 - patch_area / static_cast<double>(width * height);

  Sample out = a;
  for (std::size_t y = y0; y < y1; ++y) {
    for (std::size_t x = x0; x < x1; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        out.image.at3(y, x, c) = b.image.at3(y, x, c);
      }
    }
  }
  out.label = combine_labels(a.label, b.label, result.lambda_eff, mode);
  out.neutral = 0.0;
  out.source = mixed_source(a, b);
  result.sample = std::move(out);
  return result;
}

CutmixResult cutmix(const Sample& a, const Sample& b, double lambda, RngStream& rng,
                    MixMode mode) {
  const std::size_t height = a.image.dim(0);
  const std::size_t width = a.image.dim(1);
  const auto cx = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(width) - 1));
  const auto cy = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(height) - 1));
  return cutmix_at(a, b, lambda, cx, cy, mode);
}

Tensor cutout(const Tensor& image, RngStream& rng, std::size_t hole_size) {
  const std::size_t height = image.dim(0);
  const std::size_t width = image.dim(1);
  if (hole_size > std::min(height, width)) {
    throw std::invalid_argument("cutout: hole_size exceeds image size");
  }
  if (hole_size == 0) return image;

  const auto x0 = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(width - hole_size)));
  const auto y0 = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(height - hole_size)));

  Tensor out = image;
  for (std::size_t y = y0; y < y0 + hole_size; ++y) {
    for (std::size_t x = x0; x < x0 + hole_size; ++x) {
      for (std::size_t c = 0; c < image.dim(2); ++c) out.at3(y, x, c) = 0.5;
    }
  }
  return out;
}

Tensor flip_horizontal(const Tensor& image) {
  Tensor out = image;
  const std::size_t height = image.dim(0);
  const std::size_t width = image.dim(1);
  const std::size_t channels = image.dim(2);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        out.at3(y, x, c) = image.at3(y, width - 1 - x, c);
      }
    }
  }
  return out;
}

Sample basic_augment(const Sample& sample, RngStream& rng, const AugmentConfig& config) {
  if (config.flip_p < 0.0 || config.flip_p > 1.0) {
    throw std::invalid_argument("augment: flip_p must lie in [0,1]");
  }
  if (!(config.crop_scale > 0.0 && config.crop_scale <= 1.0)) {
    throw std::invalid_argument("augment: crop_scale must lie in (0,1]");
  }
  if (config.jitter_strength < 0.0) {
    throw std::invalid_argument("augment: jitter_strength must be >= 0");
  }

  Sample out = sample;
  const std::size_t height = out.image.dim(0);
  const std::size_t width = out.image.dim(1);
  const std::size_t channels = out.image.dim(2);

  if (rng.bernoulli(config.flip_p)) {
    out.image = flip_horizontal(out.image);
  }

  if (config.jitter_strength > 0.0) {
    std::vector<double> gain(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      gain[c] = rng.uniform(1.0 - config.jitter_strength, 1.0 + config.jitter_strength);
    }
    for (std::size_t i = 0; i < out.image.numel(); ++i) {
      out.image.data[i] = std::clamp(out.image.data[i] * gain[i % channels], 0.0, 1.0);
    }
  }

  if (config.crop_scale < 1.0) {
    const double side = std::sqrt(config.crop_scale);
    const auto crop_w = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(side * static_cast<double>(width))));
    const auto crop_h = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(side * static_cast<double>(height))));
    const auto x0 = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(width - crop_w)));
    const auto y0 = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(height - crop_h)));

    Tensor crop = Tensor::zeros({crop_h, crop_w, channels});
    for (std::size_t y = 0; y < crop_h; ++y) {
      for (std::size_t x = 0; x < crop_w; ++x) {
        for (std::size_t c = 0; c < channels; ++c) {
          crop.at3(y, x, c) = out.image.at3(y0 + y, x0 + x, c);
        }
      }
    }
    out.image = bilinear_resize(crop, height, width);
  }

  return out;
}

}  // namespace curricomp
