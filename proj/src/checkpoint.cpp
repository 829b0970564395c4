#include "curricomp/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace curricomp {

namespace {

nlohmann::json spec_to_json(const ModelSpec& spec) {
  nlohmann::json layers = nlohmann::json::array();
  for (const LayerSpec& layer : spec.layers) {
    nlohmann::json j{{"kind", layer_kind_name(layer.kind)}};
    if (layer.kind == LayerKind::Dense) j["units"] = layer.units;
    layers.push_back(j);
  }
  return nlohmann::json{
      {"input", {spec.input_height, spec.input_width, spec.input_channels}},
      {"layers", layers},
      {"num_classes", spec.num_classes},
  };
}

ModelSpec spec_from_json(const nlohmann::json& j) {
  ModelSpec spec;
  spec.input_height = j.at("input").at(0).get<std::size_t>();
  spec.input_width = j.at("input").at(1).get<std::size_t>();
  spec.input_channels = j.at("input").at(2).get<std::size_t>();
  spec.num_classes = j.at("num_classes").get<std::size_t>();
  for (const auto& lj : j.at("layers")) {
    const std::string kind = lj.at("kind").get<std::string>();
    if (kind == "dense") {
      spec.layers.push_back({LayerKind::Dense, lj.at("units").get<std::size_t>()});
    } else if (kind == "relu") {
      spec.layers.push_back({LayerKind::ReLU, 0});
    } else if (kind == "sigmoid") {
      spec.layers.push_back({LayerKind::Sigmoid, 0});
    } else {
      throw std::runtime_error("checkpoint: unknown layer kind '" + kind + "'");
    }
  }
  return spec;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelSpec& spec,
                     const ModelState& state, const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for writing");

  nlohmann::json j = spec_to_json(spec);
  j["epoch"] = meta.epoch;
  j["val_macro_f1"] = meta.val_macro_f1;
  j["best_val_f1"] = meta.best_val_f1;
  j["best_epoch"] = meta.best_epoch;
  j["param_count"] = param_count(state);

  out << kCheckpointHeader << "\n" << j.dump() << "\n";
  for (const DenseParams& p : state.dense) {
    out.write(reinterpret_cast<const char*>(p.w.data()),
              static_cast<std::streamsize>(p.w.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(p.b.data()),
              static_cast<std::streamsize>(p.b.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());

  std::string header;
  if (!std::getline(in, header) || header != kCheckpointHeader) {
    throw std::runtime_error("checkpoint: " + path.string() +
                             " is not a CURRICOMP-CKPT-v1 checkpoint");
  }
  std::string meta_line;
  if (!std::getline(in, meta_line)) {
    throw std::runtime_error("checkpoint: " + path.string() + " is truncated (missing metadata)");
  }

  Checkpoint ckpt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(meta_line);
    ckpt.spec = spec_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("checkpoint: bad metadata in " + path.string() + ": " + e.what());
  }
  ckpt.meta.epoch = j.value("epoch", 0);
  ckpt.meta.val_macro_f1 = j.value("val_macro_f1", 0.0);
  ckpt.meta.best_val_f1 = j.value("best_val_f1", 0.0);
  ckpt.meta.best_epoch = j.value("best_epoch", 0);

  std::size_t width = ckpt.spec.input_dim();
  for (const LayerSpec& layer : ckpt.spec.layers) {
    if (layer.kind != LayerKind::Dense) continue;
    DenseParams p;
    p.in = width;
    p.out = layer.units;
    p.w.resize(p.in * p.out);
    p.b.resize(p.out);
    in.read(reinterpret_cast<char*>(p.w.data()),
            static_cast<std::streamsize>(p.w.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(p.b.data()),
            static_cast<std::streamsize>(p.b.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: " + path.string() + " is truncated");
    ckpt.state.dense.push_back(std::move(p));
    width = layer.units;
  }

  const std::size_t expected = j.value("param_count", std::size_t{0});
  if (expected != 0 && expected != param_count(ckpt.state)) {
    throw std::runtime_error("checkpoint: parameter count mismatch in " + path.string());
  }
  return ckpt;
}

}  // namespace curricomp
