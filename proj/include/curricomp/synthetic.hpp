#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "curricomp/sample.hpp"

namespace curricomp {

struct SyntheticConfig {
  std::size_t n_per_class = 200;
  std::size_t resolution = 32;
  double noise_sigma = 0.02;
  std::uint64_t seed = 0;
};

/// Procedurally generated one-hot dataset: each basic class is an oriented
/// sinusoidal grating with a class-specific frequency and angle, plus small
/// seeded jitter and additive Gaussian noise, clipped to [0,1] and quantized
/// to the 8-bit grid so that PPM round-trips are exact. Deterministic given
/// the seed. Samples are in class-major order (all of class 0 first).
std::vector<Sample> generate_synthetic(const SyntheticConfig& config);

/// generate_synthetic + write_dataset; returns the manifest path.
std::filesystem::path generate_synthetic_to_disk(const SyntheticConfig& config,
                                                 const std::filesystem::path& out_dir);

}  // namespace curricomp
