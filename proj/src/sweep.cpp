#include "curricomp/sweep.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "curricomp/train.hpp"

namespace curricomp {

namespace {

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("sweep config: cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("sweep config: cannot parse " + path.string() + ": " + e.what());
  }

  SweepConfig config;
  if (j.contains("common")) {
    config.common = run_config_from_json_text(j.at("common").dump(), path.string() + "#common");
  }
  if (j.contains("output_csv")) config.output_csv = j.at("output_csv").get<std::string>();
  if (!j.contains("experiments") || !j.at("experiments").is_array() ||
      j.at("experiments").empty()) {
    throw std::invalid_argument("sweep config: at least one experiment is required");
  }
  int next_id = 1;
  for (const auto& ej : j.at("experiments")) {
    SweepExperiment exp;
    exp.exp_id = ej.value("exp", next_id);
    next_id = exp.exp_id + 1;
    exp.epoch_dis = ej.value("epoch_dis", config.common.epoch_dis);
    exp.compound_prop = ej.value("compound_prop", config.common.compound_prop);
    exp.mixup = ej.value("mixup", config.common.mixup.enabled);
    exp.cutmix = ej.value("cutmix", config.common.cutmix.enabled);
    config.experiments.push_back(std::move(exp));
  }
  return config;
}

std::vector<SweepRow> sweep(const SweepConfig& config, const std::vector<Sample>& dataset) {
  if (config.experiments.empty()) {
    throw std::invalid_argument("sweep: at least one experiment is required");
  }

  std::vector<SweepRow> rows;
  for (const SweepExperiment& exp : config.experiments) {
    SweepRow row;
    row.experiment = exp;

    RunConfig run = config.common;
    run.epoch_dis = exp.epoch_dis;
    run.compound_prop = exp.compound_prop;
    run.mixup.enabled = exp.mixup;
    run.cutmix.enabled = exp.cutmix;
    run.output_dir = (std::filesystem::path(config.common.output_dir) /
                      ("exp" + std::to_string(exp.exp_id)))
                         .string();

    try {
      const TrainOutcome outcome = train(run, dataset);
      row.macro_f1 = outcome.best_val_f1;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.macro_f1 = std::numeric_limits<double>::quiet_NaN();
      std::cerr << "sweep: experiment " << exp.exp_id << " failed: " << e.what() << "\n";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_schedule(const std::vector<int>& epoch_dis) {
  std::string out = "[";
  for (std::size_t i = 0; i < epoch_dis.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(epoch_dis[i]);
  }
  return out + "]";
}

std::string format_proportions(const std::vector<double>& compound_prop) {
  std::string out = "[";
  for (std::size_t i = 0; i < compound_prop.size(); ++i) {
    if (i) out += ", ";
    out += format_number(compound_prop[i]);
  }
  return out + "]";
}

std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "exp,epoch_dis,compound_prop,mixup,cutmix,macro_f1\n";
  for (const SweepRow& row : rows) {
    char f1[32];
    std::snprintf(f1, sizeof(f1), "%.6f", row.macro_f1);
    out << row.experiment.exp_id << ",\"" << format_schedule(row.experiment.epoch_dis) << "\",\""
        << format_proportions(row.experiment.compound_prop) << "\","
        << (row.experiment.mixup ? 1 : 0) << "," << (row.experiment.cutmix ? 1 : 0) << ","
        << (row.failed ? "nan" : f1) << "\n";
  }
  return out.str();
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("sweep: cannot write " + path.string());
  out << sweep_csv_text(rows);
  if (!out) throw std::runtime_error("sweep: write failed for " + path.string());
}

}  // namespace curricomp
