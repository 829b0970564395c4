#include "curricomp/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "curricomp/manifest.hpp"
#include "curricomp/rng.hpp"

namespace curricomp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Per-class grating parameters: distinct angle and spatial frequency.
struct GlyphFamily {
  double angle_deg;
  double cycles;
};

constexpr GlyphFamily kFamilies[kNumBasicClasses] = {
    {0.0, 3.0},    // anger
    {30.0, 4.0},   // disgust
    {60.0, 5.0},   // fear
    {90.0, 6.0},   // happiness
    {120.0, 7.0},  // sadness
    {150.0, 8.0},  // surprise
};

constexpr double kAmplitude = 0.42;
constexpr double kAngleJitterDeg = 2.0;
constexpr double kFreqJitter = 0.01;   // relative
constexpr double kPhaseJitter = 0.15;  // radians

double quantize8(double v) {
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return std::round(v * 255.0) / 255.0;
}

}  // namespace

std::vector<Sample> generate_synthetic(const SyntheticConfig& config) {
  if (config.resolution < 16) {
    throw std::invalid_argument("synthetic: resolution must be >= 16");
  }
  if (config.noise_sigma < 0.0) {
    throw std::invalid_argument("synthetic: noise_sigma must be >= 0");
  }
  if (config.n_per_class == 0) {
    throw std::invalid_argument("synthetic: n_per_class must be >= 1");
  }

  const RngStream root = RngStream(config.seed).substream("synthetic");
  const std::size_t res = config.resolution;

  std::vector<Sample> samples;
  samples.reserve(kNumBasicClasses * config.n_per_class);

  for (std::size_t cls = 0; cls < kNumBasicClasses; ++cls) {
    const GlyphFamily& family = kFamilies[cls];
    for (std::size_t i = 0; i < config.n_per_class; ++i) {
      RngStream rng = root.substream(cls, i);
      const double angle =
          (family.angle_deg + rng.uniform(-kAngleJitterDeg, kAngleJitterDeg)) * kPi / 180.0;
      const double cycles = family.cycles * (1.0 + rng.uniform(-kFreqJitter, kFreqJitter));
      const double phase = rng.uniform(-kPhaseJitter, kPhaseJitter);
      const double ca = std::cos(angle);
      const double sa = std::sin(angle);

      Sample s;
      s.label = one_hot(static_cast<BasicClass>(cls));
      s.source = SampleSource::Basic;
      s.image = Tensor::zeros({res, res, 3});
      for (std::size_t y = 0; y < res; ++y) {
        const double v = (static_cast<double>(y) + 0.5) / static_cast<double>(res) - 0.5;
        for (std::size_t x = 0; x < res; ++x) {
          const double u = (static_cast<double>(x) + 0.5) / static_cast<double>(res) - 0.5;
          const double wave = std::cos(2.0 * kPi * cycles * (u * ca + v * sa) + phase);
          double value = 0.5 + kAmplitude * wave;
          if (config.noise_sigma > 0.0) value += rng.normal(0.0, config.noise_sigma);
          value = quantize8(value);
          for (std::size_t c = 0; c < 3; ++c) s.image.at3(y, x, c) = value;
        }
      }
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

std::filesystem::path generate_synthetic_to_disk(const SyntheticConfig& config,
                                                 const std::filesystem::path& out_dir) {
  return write_dataset(out_dir, generate_synthetic(config));
}

}  // namespace curricomp
