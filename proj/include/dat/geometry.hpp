#pragma once

#include <stdexcept>
#include <vector>

#include "dat/types.hpp"

namespace dat {

// sign with sign(0) = 0, so zero-gradient coordinates are fixed points of
// signed-ascent updates.
inline double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Componentwise clamp of v onto the l-inf ball of the given radius around
// center. Idempotent and nonexpansive.
template <typename DerivedV, typename DerivedC>
Vector project_linf(const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedC>& center,
                    double radius) {
  if (radius < 0.0) throw std::invalid_argument("project_linf: negative radius");
  if (v.size() != center.size()) throw std::invalid_argument("project_linf: size mismatch");
  return v.array().max(center.array() - radius).min(center.array() + radius).matrix();
}

// Euclidean norm of each layer, in layer order.
inline std::vector<double> layer_norms(const LayeredParams& p) {
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(p.layer_count()));
  for (Index i = 0; i < p.layer_count(); ++i) norms.push_back(p.layer(i).norm());
  return norms;
}

}  // namespace dat
