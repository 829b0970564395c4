#include "curricomp/manifest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "curricomp/image.hpp"
#include "curricomp/rng.hpp"

namespace curricomp {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_label(const std::string& cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::runtime_error("manifest: row " + std::to_string(row) + ": label column " +
                             std::to_string(col) + " ('" + cell + "') is not a number");
  }
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::runtime_error("manifest: row " + std::to_string(row) + ": label " + cell +
                             " outside [0,1]");
  }
  return v;
}

std::string format_label(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<Sample> load_manifest(const std::filesystem::path& manifest_path,
                                  const std::filesystem::path& image_root,
                                  std::size_t resolution) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("manifest: cannot open " + manifest_path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("manifest: " + manifest_path.string() + " is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kManifestHeader) {
    throw std::runtime_error("manifest: bad header in " + manifest_path.string() +
                             " (expected '" + kManifestHeader + "')");
  }

  std::vector<Sample> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;

    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != 8) {
      throw std::runtime_error("manifest: row " + std::to_string(row) + ": expected 8 columns, got " +
                               std::to_string(cells.size()));
    }

    Sample s;
    for (std::size_t c = 0; c < kNumBasicClasses; ++c) {
      s.label[c] = parse_label(cells[c + 1], row, c + 1);
    }
    s.neutral = parse_label(cells[7], row, 7);
    s.source = is_one_hot(s.label) ? SampleSource::Basic : SampleSource::NaturalCompound;

    const std::filesystem::path image_path = image_root / cells[0];
    try {
      s.image = bilinear_resize(load_image(image_path), resolution, resolution);
    } catch (const std::exception& e) {
      throw std::runtime_error("manifest: row " + std::to_string(row) + ": " + e.what());
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::filesystem::path write_dataset(const std::filesystem::path& dir,
                                    const std::vector<Sample>& samples) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path manifest_path = dir / "manifest.csv";
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("manifest: cannot write " + manifest_path.string());

  out << kManifestHeader << "\n";
  std::size_t index = 0;
  for (const Sample& s : samples) {
    const std::string stem =
        s.neutral > 0.0 ? "neutral" : basic_class_name(static_cast<BasicClass>(dominant_class(s.label)));
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%04zu.ppm", stem.c_str(), index);
    write_ppm(dir / name, s.image);
    out << name;
    for (const double v : s.label) out << "," << format_label(v);
    out << "," << format_label(s.neutral) << "\n";
    ++index;
  }
  if (!out) throw std::runtime_error("manifest: write failed for " + manifest_path.string());
  return manifest_path;
}

std::vector<Sample> filter_neutral(std::vector<Sample> samples) {
  std::vector<Sample> kept;
  kept.reserve(samples.size());
  for (Sample& s : samples) {
    if (s.neutral > 0.0) continue;
    kept.push_back(std::move(s));
  }
  return kept;
}

DatasetSplit split(const std::vector<Sample>& samples, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("split: val_fraction must lie in (0,1)");
  }
  if (samples.size() < 2) {
    throw std::invalid_argument("split: need at least 2 samples");
  }

  DatasetSplit result;
  result.seed = seed;
  RngStream rng = RngStream(seed).substream("split");

  std::array<std::vector<std::size_t>, kNumBasicClasses> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_class[dominant_class(samples[i].label)].push_back(i);
  }

  bool can_stratify = true;
  for (const auto& group : by_class) {
    if (!group.empty() && group.size() < 2) {
      can_stratify = false;
      break;
    }
  }

  auto take = [&](std::vector<std::size_t> group) {
    rng.shuffle(group);
    const auto n = static_cast<std::size_t>(group.size());
    std::size_t n_val = static_cast<std::size_t>(
        std::lround(val_fraction * static_cast<double>(n)));
    n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      (i < n_val ? result.val : result.train).push_back(group[i]);
    }
  };

  if (can_stratify) {
    for (const auto& group : by_class) {
      if (!group.empty()) take(group);
    }
  } else {
    std::cerr << "split: a class has fewer than 2 samples; falling back to a global split\n";
    result.stratified = false;
    std::vector<std::size_t> all(samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all));
  }

  std::sort(result.train.begin(), result.train.end());
  std::sort(result.val.begin(), result.val.end());
  return result;
}

std::vector<Sample> gather(const std::vector<Sample>& samples,
                           const std::vector<std::size_t>& indices) {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (const std::size_t i : indices) out.push_back(samples[i]);
  return out;
}

}  // namespace curricomp
