#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "curricomp/sample.hpp"

namespace curricomp {

inline constexpr const char* kManifestHeader =
    "path,anger,disgust,fear,happiness,sadness,surprise,neutral";

/// Loads a CSV manifest (header exactly kManifestHeader, one image per row,
/// label cells in [0,1], paths relative to image_root). Images are decoded,
/// bilinearly resized to resolution x resolution and scaled to [0,1].
/// Samples come back in manifest order; one-hot rows are tagged Basic,
/// anything else NaturalCompound. Errors name the offending data row
/// (1-based, header excluded).
std::vector<Sample> load_manifest(const std::filesystem::path& manifest_path,
                                  const std::filesystem::path& image_root,
                                  std::size_t resolution);

/// Writes samples as PPM files plus a manifest.csv into `dir`. File names
/// are `<stem>_NNNN.ppm` where the stem is the dominant class name. Returns
/// the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir,
                                    const std::vector<Sample>& samples);

/// Drops every sample whose neutral indicator is > 0, preserving order.
/// Idempotent.
std::vector<Sample> filter_neutral(std::vector<Sample> samples);

struct DatasetSplit {
  std::vector<std::size_t> train;  // indices into the input sample list
  std::vector<std::size_t> val;
  std::uint64_t seed = 0;
  bool stratified = true;  // false when a tiny class forced the global fallback
};

/// Deterministic train/val split, stratified by dominant label class.
/// Requires 0 < val_fraction < 1. Classes with fewer than 2 samples force a
/// global (non-stratified) split; both sides always end up non-empty.
DatasetSplit split(const std::vector<Sample>& samples, double val_fraction, std::uint64_t seed);

std::vector<Sample> gather(const std::vector<Sample>& samples,
                           const std::vector<std::size_t>& indices);

}  // namespace curricomp
