#pragma once

#include <filesystem>
#include <string>

#include "curricomp/model.hpp"

namespace curricomp {

inline constexpr const char* kCheckpointHeader = "CURRICOMP-CKPT-v1";

struct CheckpointMeta {
  int epoch = 0;
  double val_macro_f1 = 0.0;
  double best_val_f1 = 0.0;
  int best_epoch = 0;
};

/// Single-file checkpoint: a versioned header line, one line of structured
/// text (JSON) describing the architecture and metadata, then the raw
/// little-endian doubles of every Dense layer's weights and biases in order.
void save_checkpoint(const std::filesystem::path& path, const ModelSpec& spec,
                     const ModelState& state, const CheckpointMeta& meta = {});

struct Checkpoint {
  ModelSpec spec;
  ModelState state;
  CheckpointMeta meta;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace curricomp
