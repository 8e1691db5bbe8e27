#pragma once

#include <string>
#include <vector>

#include "dat/types.hpp"

namespace dat {

enum class Activation { relu, tanh };

enum class Architecture { linear_softmax, mlp };

// Small classifiers with hand-derived gradients w.r.t. both parameters and
// inputs. Parameters live in a LayeredParams with one weight layer followed by
// one bias layer per linear map, in network order. A weight layer stores the
// out x in matrix row-major (row r = weights of output unit r).
struct ModelSpec {
  Architecture architecture = Architecture::linear_softmax;
  Index input_dim = 0;
  Index class_count = 0;
  std::vector<Index> hidden;  // mlp only
  Activation activation = Activation::relu;

  // Unit counts of the linear maps: input_dim, hidden..., class_count.
  std::vector<Index> unit_counts() const;
  std::vector<Index> param_layout() const;
  void validate() const;
};

struct LabeledBatch {
  std::vector<Vector> inputs;
  std::vector<int> labels;
  std::vector<bool> is_pseudo;  // same length as inputs; empty means all false
};

Vector logits(const ModelSpec& spec, const LayeredParams& theta, const Vector& x);

int predict(const ModelSpec& spec, const LayeredParams& theta, const Vector& x);

double sample_loss(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y);

LayeredParams sample_grad_theta(const ModelSpec& spec, const LayeredParams& theta, const Vector& x,
                                int y);

// d(cross-entropy)/dx at (x, y); what l-inf attack solvers consume.
Vector grad_input(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y);

// Mean softmax cross-entropy over the batch.
double loss(const ModelSpec& spec, const LayeredParams& theta, const LabeledBatch& batch);

// Gradient of the batch mean; equals the mean of per-sample gradients.
LayeredParams grad_theta(const ModelSpec& spec, const LayeredParams& theta,
                         const LabeledBatch& batch);

class SeededRng;

// Gaussian init of all weight layers at the given scale; biases start at zero.
LayeredParams init_params(const ModelSpec& spec, SeededRng& rng, double scale);

}  // namespace dat
