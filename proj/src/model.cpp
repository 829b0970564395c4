#include "curricomp/model.hpp"

#include <cmath>
#include <stdexcept>

#include "curricomp/loss.hpp"
#include "curricomp/rng.hpp"

namespace curricomp {

namespace {

constexpr double kSigmoidClamp = 1e-12;

// C[m x n] = A[m x k] * B[k x n], row-major, ikj order for contiguous inner loops.
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[k x n] = A^T[k x m] * B[m x n] where A is m x k.
void matmul_at_b(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  for (std::size_t i = 0; i < k * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    const double* brow = b + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      double* crow = c + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[m x k] = A[m x n] * B^T[n x k] where B is k x n.
void matmul_a_bt(const double* a, const double* b, double* c, std::size_t m, std::size_t n,
                 std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * n;
    double* crow = c + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      const double* brow = b + j * n;
      double acc = 0.0;
      for (std::size_t p = 0; p < n; ++p) acc += arow[p] * brow[p];
      crow[j] = acc;
    }
  }
}

struct ForwardTrace {
  // Activation entering each layer (index i) plus the final output at the end.
  std::vector<Tensor> acts;
};

std::size_t batch_rows(const ModelSpec& spec, const Tensor& batch) {
  if (batch.rank() == 4) {
    if (batch.dim(1) != spec.input_height || batch.dim(2) != spec.input_width ||
        batch.dim(3) != spec.input_channels) {
      throw std::invalid_argument("forward: batch dims " + shape_to_string(batch.shape) +
                                  " do not match model input " +
                                  std::to_string(spec.input_height) + "x" +
                                  std::to_string(spec.input_width) + "x" +
                                  std::to_string(spec.input_channels));
    }
    return batch.dim(0);
  }
  if (batch.rank() == 2) {
    if (batch.dim(1) != spec.input_dim()) {
      throw std::invalid_argument("forward: flattened batch width " +
                                  std::to_string(batch.dim(1)) + " != model input dim " +
                                  std::to_string(spec.input_dim()));
    }
    return batch.dim(0);
  }
  throw std::invalid_argument("forward: batch must be rank 4 (BxHxWxC) or rank 2 (BxD)");
}

void check_state_shapes(const ModelSpec& spec, const ModelState& state) {
  std::size_t width = spec.input_dim();
  std::size_t dense_idx = 0;
  for (const LayerSpec& layer : spec.layers) {
    if (layer.kind != LayerKind::Dense) continue;
    if (dense_idx >= state.dense.size()) {
      throw std::invalid_argument("model state has fewer dense layers than spec");
    }
    const DenseParams& p = state.dense[dense_idx];
    if (p.in != width || p.out != layer.units || p.w.size() != p.in * p.out ||
        p.b.size() != p.out) {
      throw std::invalid_argument("model state shape mismatch at dense layer " +
                                  std::to_string(dense_idx));
    }
    width = layer.units;
    ++dense_idx;
  }
  if (dense_idx != state.dense.size()) {
    throw std::invalid_argument("model state has more dense layers than spec");
  }
}

ForwardTrace run_forward(const ModelSpec& spec, const ModelState& state, const Tensor& batch) {
  const std::size_t rows = batch_rows(spec, batch);
  check_state_shapes(spec, state);

  ForwardTrace trace;
  trace.acts.reserve(spec.layers.size() + 1);
  trace.acts.push_back(Tensor{{rows, spec.input_dim()}, batch.data});

  std::size_t dense_idx = 0;
  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    const LayerSpec& layer = spec.layers[li];
    const Tensor& in = trace.acts.back();
    Tensor out;
    switch (layer.kind) {
      case LayerKind::Dense: {
        const DenseParams& p = state.dense[dense_idx++];
        out = Tensor::zeros({rows, p.out});
        matmul(in.data.data(), p.w.data(), out.data.data(), rows, p.in, p.out);
        for (std::size_t r = 0; r < rows; ++r) {
          double* orow = out.data.data() + r * p.out;
          for (std::size_t j = 0; j < p.out; ++j) orow[j] += p.b[j];
        }
        break;
      }
      case LayerKind::ReLU: {
        out = in;
        for (double& v : out.data) v = v > 0.0 ? v : 0.0;
        break;
      }
      case LayerKind::Sigmoid: {
        out = in;
        for (double& v : out.data) v = sigmoid(v);
        break;
      }
    }
    if (!out.all_finite()) {
      throw std::runtime_error("numeric error: non-finite activation after layer " +
                               std::to_string(li) + " (" + layer_kind_name(layer.kind) + ")");
    }
    trace.acts.push_back(std::move(out));
  }
  return trace;
}

void check_labels(const Tensor& labels, std::size_t rows, std::size_t classes) {
  if (labels.rank() != 2 || labels.dim(0) != rows || labels.dim(1) != classes) {
    throw std::invalid_argument("labels must be " + std::to_string(rows) + "x" +
                                std::to_string(classes));
  }
  for (const double y : labels.data) {
    if (!(y >= 0.0 && y <= 1.0)) {
      throw std::invalid_argument("labels must lie in [0,1]");
    }
  }
}

}  // namespace

ModelSpec make_mlp_spec(std::size_t height, std::size_t width, std::size_t channels,
                        const std::vector<std::size_t>& hidden_units, std::size_t num_classes) {
  ModelSpec spec;
  spec.input_height = height;
  spec.input_width = width;
  spec.input_channels = channels;
  spec.num_classes = num_classes;
  for (const std::size_t h : hidden_units) {
    spec.layers.push_back({LayerKind::Dense, h});
    spec.layers.push_back({LayerKind::ReLU, 0});
  }
  spec.layers.push_back({LayerKind::Dense, num_classes});
  spec.layers.push_back({LayerKind::Sigmoid, 0});
  return spec;
}

void validate_for_training(const ModelSpec& spec) {
  if (spec.input_dim() == 0) throw std::invalid_argument("model: empty input dims");
  const std::size_t n = spec.layers.size();
  if (n < 2 || spec.layers[n - 1].kind != LayerKind::Sigmoid ||
      spec.layers[n - 2].kind != LayerKind::Dense ||
      spec.layers[n - 2].units != spec.num_classes) {
    throw std::invalid_argument(
        "model: network must end in Dense(num_classes) followed by Sigmoid");
  }
  std::size_t dense_layers = 0;
  for (const LayerSpec& layer : spec.layers) {
    if (layer.kind == LayerKind::Dense) {
      if (layer.units == 0) throw std::invalid_argument("model: Dense layer with 0 units");
      ++dense_layers;
    }
  }
  if (dense_layers < 2) {
    throw std::invalid_argument("model: at least one hidden Dense layer is required");
  }
}

ModelState init_state(const ModelSpec& spec, std::uint64_t seed) {
  RngStream rng = RngStream(seed).substream("init");
  ModelState state;
  std::size_t width = spec.input_dim();
  for (const LayerSpec& layer : spec.layers) {
    if (layer.kind != LayerKind::Dense) continue;
    DenseParams p;
    p.in = width;
    p.out = layer.units;
    const double bound = std::sqrt(6.0 / static_cast<double>(p.in + p.out));
    p.w.resize(p.in * p.out);
    p.b.resize(p.out);
    for (double& v : p.w) v = rng.uniform(-bound, bound);
    for (double& v : p.b) v = rng.uniform(-bound, bound);
    state.dense.push_back(std::move(p));
    width = layer.units;
  }
  return state;
}

std::size_t param_count(const ModelState& state) {
  std::size_t n = 0;
  for (const DenseParams& p : state.dense) n += p.w.size() + p.b.size();
  return n;
}

bool states_equal(const ModelState& a, const ModelState& b) {
  if (a.dense.size() != b.dense.size()) return false;
  for (std::size_t i = 0; i < a.dense.size(); ++i) {
    if (a.dense[i].in != b.dense[i].in || a.dense[i].out != b.dense[i].out ||
        a.dense[i].w != b.dense[i].w || a.dense[i].b != b.dense[i].b) {
      return false;
    }
  }
  return true;
}

double sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  if (p < kSigmoidClamp) p = kSigmoidClamp;
  if (p > 1.0 - kSigmoidClamp) p = 1.0 - kSigmoidClamp;
  return p;
}

Tensor forward(const ModelSpec& spec, const ModelState& state, const Tensor& batch) {
  ForwardTrace trace = run_forward(spec, state, batch);
  return std::move(trace.acts.back());
}

Gradients backward(const ModelSpec& spec, const ModelState& state, const Tensor& batch,
                   const Tensor& labels, double* loss_out) {
  ForwardTrace trace = run_forward(spec, state, batch);
  const std::size_t rows = trace.acts.front().dim(0);
  const Tensor& output = trace.acts.back();
  check_labels(labels, rows, output.dim(1));
  if (loss_out != nullptr) *loss_out = bce_loss(output, labels);

  Gradients grads;
  grads.dense.resize(state.dense.size());
  for (std::size_t i = 0; i < state.dense.size(); ++i) {
    grads.dense[i].in = state.dense[i].in;
    grads.dense[i].out = state.dense[i].out;
    grads.dense[i].w.assign(state.dense[i].w.size(), 0.0);
    grads.dense[i].b.assign(state.dense[i].b.size(), 0.0);
  }

  // delta = dL/d(input of layer li); start above the last layer.
  Tensor delta;
  std::size_t li = spec.layers.size();
  std::size_t dense_idx = state.dense.size();
  const double inv_rows = 1.0 / static_cast<double>(rows);

  if (!spec.layers.empty() && spec.layers.back().kind == LayerKind::Sigmoid) {
    // Fused BCE+sigmoid gradient: dL/dz = (p - y) / B, exact and stable.
    delta = Tensor::zeros(output.shape);
    for (std::size_t i = 0; i < output.numel(); ++i) {
      delta.data[i] = (output.data[i] - labels.data[i]) * inv_rows;
    }
    --li;
  } else {
    // Generic seed: dL/dp of the clamped BCE.
    delta = Tensor::zeros(output.shape);
    for (std::size_t i = 0; i < output.numel(); ++i) {
      const double p = std::min(std::max(output.data[i], kProbClamp), 1.0 - kProbClamp);
      const double y = labels.data[i];
      delta.data[i] = (-y / p + (1.0 - y) / (1.0 - p)) * inv_rows;
    }
  }

  while (li > 0) {
    --li;
    const LayerSpec& layer = spec.layers[li];
    const Tensor& in = trace.acts[li];
    switch (layer.kind) {
      case LayerKind::Sigmoid: {
        const Tensor& out = trace.acts[li + 1];
        for (std::size_t i = 0; i < delta.numel(); ++i) {
          delta.data[i] *= out.data[i] * (1.0 - out.data[i]);
        }
        break;
      }
      case LayerKind::ReLU: {
        for (std::size_t i = 0; i < delta.numel(); ++i) {
          if (in.data[i] <= 0.0) delta.data[i] = 0.0;
        }
        break;
      }
      case LayerKind::Dense: {
        --dense_idx;
        const DenseParams& p = state.dense[dense_idx];
        DenseParams& g = grads.dense[dense_idx];
        matmul_at_b(in.data.data(), delta.data.data(), g.w.data(), rows, p.in, p.out);
        for (std::size_t r = 0; r < rows; ++r) {
          const double* drow = delta.data.data() + r * p.out;
          for (std::size_t j = 0; j < p.out; ++j) g.b[j] += drow[j];
        }
        if (li > 0) {
          Tensor prev = Tensor::zeros({rows, p.in});
          matmul_a_bt(delta.data.data(), p.w.data(), prev.data.data(), rows, p.out, p.in);
          delta = std::move(prev);
        }
        break;
      }
    }
    if (!delta.all_finite()) {
      throw std::runtime_error("numeric error: non-finite gradient below layer " +
                               std::to_string(li) + " (" + layer_kind_name(layer.kind) + ")");
    }
  }
  return grads;
}

double model_loss(const ModelSpec& spec, const ModelState& state, const Tensor& batch,
                  const Tensor& labels) {
  return bce_loss(forward(spec, state, batch), labels);
}

std::string layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Dense: return "dense";
    case LayerKind::ReLU: return "relu";
    case LayerKind::Sigmoid: return "sigmoid";
  }
  return "?";
}

}  // namespace curricomp
