#pragma once

#include <Eigen/Dense>

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dat {

using Index = Eigen::Index;

template <typename Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMajorMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Vector = VectorT<double>;
using Matrix = MatrixT<double>;

// Model parameters partitioned into layers. The layerwise update rule, the
// optimizer moments and all gradients share this layout, so the layer list is
// fixed at construction and never empty.
template <typename Scalar>
class LayeredParamsT {
 public:
  LayeredParamsT() = default;

  explicit LayeredParamsT(std::vector<VectorT<Scalar>> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("LayeredParams: layer list is empty");
    for (const auto& l : layers_) {
      if (l.size() < 1) throw std::invalid_argument("LayeredParams: zero-dimension layer");
    }
  }

  static LayeredParamsT zeros(const std::vector<Index>& dims) {
    std::vector<VectorT<Scalar>> layers;
    layers.reserve(dims.size());
    for (Index d : dims) layers.push_back(VectorT<Scalar>::Zero(d));
    return LayeredParamsT(std::move(layers));
  }

  static LayeredParamsT zeros_like(const LayeredParamsT& other) { return zeros(other.layout()); }

  Index layer_count() const { return static_cast<Index>(layers_.size()); }

  Index dim(Index i) const { return layers_[static_cast<std::size_t>(i)].size(); }

  Index total_dim() const {
    Index d = 0;
    for (const auto& l : layers_) d += l.size();
    return d;
  }

  const VectorT<Scalar>& layer(Index i) const { return layers_[static_cast<std::size_t>(i)]; }
  VectorT<Scalar>& layer(Index i) { return layers_[static_cast<std::size_t>(i)]; }

  std::vector<Index> layout() const {
    std::vector<Index> dims;
    dims.reserve(layers_.size());
    for (const auto& l : layers_) dims.push_back(l.size());
    return dims;
  }

  bool same_layout(const LayeredParamsT& other) const { return layout() == other.layout(); }

  // Layer i occupies flat indices [offset(i), offset(i) + dim(i)).
  VectorT<Scalar> flatten() const {
    VectorT<Scalar> flat(total_dim());
    Index off = 0;
    for (const auto& l : layers_) {
      flat.segment(off, l.size()) = l;
      off += l.size();
    }
    return flat;
  }

  static LayeredParamsT unflatten(const VectorT<Scalar>& flat, const std::vector<Index>& dims) {
    Index total = std::accumulate(dims.begin(), dims.end(), Index{0});
    if (flat.size() != total) {
      throw std::invalid_argument("LayeredParams::unflatten: flat size does not match layout");
    }
    std::vector<VectorT<Scalar>> layers;
    layers.reserve(dims.size());
    Index off = 0;
    for (Index d : dims) {
      layers.push_back(flat.segment(off, d));
      off += d;
    }
    return LayeredParamsT(std::move(layers));
  }

  friend bool operator==(const LayeredParamsT& a, const LayeredParamsT& b) {
    if (a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t i = 0; i < a.layers_.size(); ++i) {
      if (a.layers_[i].size() != b.layers_[i].size()) return false;
      if (a.layers_[i] != b.layers_[i]) return false;
    }
    return true;
  }
  friend bool operator!=(const LayeredParamsT& a, const LayeredParamsT& b) { return !(a == b); }

 private:
  std::vector<VectorT<Scalar>> layers_;
};

using LayeredParams = LayeredParamsT<double>;

// y += a * x, layer by layer.
template <typename Scalar>
void add_scaled(LayeredParamsT<Scalar>& y, Scalar a, const LayeredParamsT<Scalar>& x) {
  if (!y.same_layout(x)) throw std::invalid_argument("add_scaled: layout mismatch");
  for (Index i = 0; i < y.layer_count(); ++i) y.layer(i) += a * x.layer(i);
}

template <typename Scalar>
Scalar total_norm(const LayeredParamsT<Scalar>& p) {
  Scalar sq = 0;
  for (Index i = 0; i < p.layer_count(); ++i) sq += p.layer(i).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace dat
