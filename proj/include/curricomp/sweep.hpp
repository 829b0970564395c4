#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "curricomp/config.hpp"
#include "curricomp/sample.hpp"

namespace curricomp {

/// One row of an ablation grid: a schedule plus the augmentation toggles.
struct SweepExperiment {
  int exp_id = 1;
  std::vector<int> epoch_dis;
  std::vector<double> compound_prop;
  bool mixup = true;
  bool cutmix = true;
};

struct SweepRow {
  SweepExperiment experiment;
  double macro_f1 = 0.0;  // best validation macro-F1 of the run; NaN on failure
  bool failed = false;
  std::string error;
};

struct SweepConfig {
  RunConfig common;
  std::vector<SweepExperiment> experiments;
  std::string output_csv = "sweep.csv";
};

SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Trains one model per experiment with the shared seed from `common`.
/// A failed run is recorded (NaN macro-F1) and the sweep continues.
std::vector<SweepRow> sweep(const SweepConfig& config, const std::vector<Sample>& dataset);

/// "[5, 5, 3, 3]" — bracketed, comma+space separated.
std::string format_schedule(const std::vector<int>& epoch_dis);
std::string format_proportions(const std::vector<double>& compound_prop);

/// CSV with header `exp,epoch_dis,compound_prop,mixup,cutmix,macro_f1`.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::string sweep_csv_text(const std::vector<SweepRow>& rows);

}  // namespace curricomp
