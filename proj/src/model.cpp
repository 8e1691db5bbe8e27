#include "dat/model.hpp"

#include <cmath>
#include <stdexcept>

#include "dat/rng.hpp"

namespace dat {

namespace {

using WeightMap = Eigen::Map<const RowMajorMatrixT<double>>;

WeightMap weight(const LayeredParams& theta, Index map_index, Index out, Index in) {
  return WeightMap(theta.layer(2 * map_index).data(), out, in);
}

double activate(Activation a, double z) {
  if (a == Activation::relu) return z > 0.0 ? z : 0.0;
  return std::tanh(z);
}

// Derivative in terms of preactivation z; relu'(0) is defined as 0.
double activate_deriv(Activation a, double z) {
  if (a == Activation::relu) return z > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(z);
  return 1.0 - t * t;
}

struct ForwardPass {
  std::vector<Vector> pre;  // preactivation of each linear map
  std::vector<Vector> act;  // act[0] = x, act[l] = activation(pre[l-1]) for hidden maps
};

ForwardPass forward(const ModelSpec& spec, const LayeredParams& theta, const Vector& x) {
  const auto units = spec.unit_counts();
  const Index maps = static_cast<Index>(units.size()) - 1;
  ForwardPass fp;
  fp.act.push_back(x);
  for (Index m = 0; m < maps; ++m) {
    const Index in = units[static_cast<std::size_t>(m)];
    const Index out = units[static_cast<std::size_t>(m) + 1];
    Vector z = weight(theta, m, out, in) * fp.act.back() + theta.layer(2 * m + 1);
    fp.pre.push_back(z);
    if (m + 1 < maps) {
      Vector a(out);
      for (Index j = 0; j < out; ++j) a[j] = activate(spec.activation, z[j]);
      fp.act.push_back(std::move(a));
    }
  }
  return fp;
}

Vector softmax_stable(const Vector& z) {
  const double m = z.maxCoeff();
  Vector e = (z.array() - m).exp();
  return e / e.sum();
}

void check_inputs(const ModelSpec& spec, const LayeredParams& theta, const Vector& x) {
  spec.validate();
  if (theta.layout() != spec.param_layout()) {
    throw std::invalid_argument("model: parameter layout does not match spec");
  }
  if (x.size() != spec.input_dim) throw std::invalid_argument("model: input dimension mismatch");
}

void check_label(const ModelSpec& spec, int y) {
  if (y < 0 || y >= spec.class_count) throw std::invalid_argument("model: label out of range");
}

// Backprop of the cross-entropy at (x, y). Returns the parameter gradient and,
// when input_grad is non-null, writes d(loss)/dx into it.
LayeredParams backprop(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y,
                       Vector* input_grad) {
  const auto units = spec.unit_counts();
  const Index maps = static_cast<Index>(units.size()) - 1;
  ForwardPass fp = forward(spec, theta, x);

  LayeredParams grad = LayeredParams::zeros(spec.param_layout());
  Vector dz = softmax_stable(fp.pre.back());
  dz[y] -= 1.0;

  for (Index m = maps - 1; m >= 0; --m) {
    const Index in = units[static_cast<std::size_t>(m)];
    const Index out = units[static_cast<std::size_t>(m) + 1];
    const Vector& a_in = fp.act[static_cast<std::size_t>(m)];

    // dW (row-major) = dz * a_in^T, flattened in the same order as the layer.
    Eigen::Map<RowMajorMatrixT<double>> dw(grad.layer(2 * m).data(), out, in);
    dw = dz * a_in.transpose();
    grad.layer(2 * m + 1) = dz;

    Vector da = weight(theta, m, out, in).transpose() * dz;
    if (m == 0) {
      if (input_grad != nullptr) *input_grad = da;
      break;
    }
    const Vector& z_prev = fp.pre[static_cast<std::size_t>(m) - 1];
    dz.resize(in);
    for (Index j = 0; j < in; ++j) dz[j] = da[j] * activate_deriv(spec.activation, z_prev[j]);
  }
  return grad;
}

}  // namespace

std::vector<Index> ModelSpec::unit_counts() const {
  std::vector<Index> units;
  units.push_back(input_dim);
  if (architecture == Architecture::mlp) {
    for (Index h : hidden) units.push_back(h);
  }
  units.push_back(class_count);
  return units;
}

std::vector<Index> ModelSpec::param_layout() const {
  const auto units = unit_counts();
  std::vector<Index> dims;
  for (std::size_t m = 0; m + 1 < units.size(); ++m) {
    dims.push_back(units[m] * units[m + 1]);  // weight
    dims.push_back(units[m + 1]);             // bias
  }
  return dims;
}

void ModelSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("ModelSpec: input_dim must be >= 1");
  if (class_count < 2) throw std::invalid_argument("ModelSpec: class_count must be >= 2");
  if (architecture == Architecture::linear_softmax && !hidden.empty()) {
    throw std::invalid_argument("ModelSpec: linear-softmax takes no hidden sizes");
  }
  if (architecture == Architecture::mlp) {
    if (hidden.empty()) throw std::invalid_argument("ModelSpec: mlp needs hidden sizes");
    for (Index h : hidden) {
      if (h < 1) throw std::invalid_argument("ModelSpec: hidden size must be >= 1");
    }
  }
}

Vector logits(const ModelSpec& spec, const LayeredParams& theta, const Vector& x) {
  check_inputs(spec, theta, x);
  return forward(spec, theta, x).pre.back();
}

int predict(const ModelSpec& spec, const LayeredParams& theta, const Vector& x) {
  const Vector z = logits(spec, theta, x);
  Index best = 0;
  for (Index c = 1; c < z.size(); ++c) {
    if (z[c] > z[best]) best = c;  // strict: ties resolve to the smallest index
  }
  return static_cast<int>(best);
}

double sample_loss(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y) {
  check_inputs(spec, theta, x);
  check_label(spec, y);
  const Vector z = forward(spec, theta, x).pre.back();
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  return lse - z[y];
}

LayeredParams sample_grad_theta(const ModelSpec& spec, const LayeredParams& theta, const Vector& x,
                                int y) {
  check_inputs(spec, theta, x);
  check_label(spec, y);
  return backprop(spec, theta, x, y, nullptr);
}

Vector grad_input(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y) {
  check_inputs(spec, theta, x);
  check_label(spec, y);
  Vector gx(x.size());
  backprop(spec, theta, x, y, &gx);
  return gx;
}

double loss(const ModelSpec& spec, const LayeredParams& theta, const LabeledBatch& batch) {
  if (batch.inputs.empty()) throw std::invalid_argument("loss: empty batch");
  if (batch.inputs.size() != batch.labels.size()) {
    throw std::invalid_argument("loss: inputs/labels length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < batch.inputs.size(); ++i) {
    total += sample_loss(spec, theta, batch.inputs[i], batch.labels[i]);
  }
  return total / static_cast<double>(batch.inputs.size());
}

LayeredParams grad_theta(const ModelSpec& spec, const LayeredParams& theta,
                         const LabeledBatch& batch) {
  if (batch.inputs.empty()) throw std::invalid_argument("grad_theta: empty batch");
  if (batch.inputs.size() != batch.labels.size()) {
    throw std::invalid_argument("grad_theta: inputs/labels length mismatch");
  }
  LayeredParams sum = LayeredParams::zeros(spec.param_layout());
  for (std::size_t i = 0; i < batch.inputs.size(); ++i) {
    add_scaled(sum, 1.0, sample_grad_theta(spec, theta, batch.inputs[i], batch.labels[i]));
  }
  const double inv = 1.0 / static_cast<double>(batch.inputs.size());
  for (Index l = 0; l < sum.layer_count(); ++l) sum.layer(l) *= inv;
  return sum;
}

LayeredParams init_params(const ModelSpec& spec, SeededRng& rng, double scale) {
  spec.validate();
  LayeredParams theta = LayeredParams::zeros(spec.param_layout());
  for (Index l = 0; l < theta.layer_count(); l += 2) {
    for (Index j = 0; j < theta.layer(l).size(); ++j) theta.layer(l)[j] = scale * rng.normal();
  }
  return theta;
}

}  // namespace dat
