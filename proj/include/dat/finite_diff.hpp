#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "dat/types.hpp"

namespace dat {

// Central-difference gradient estimate, (f(x + h e_j) - f(x - h e_j)) / (2h)
// per component. Second-order accurate; the default step balances truncation
// against roundoff for O(1) function values.
template <typename F>
Vector finite_diff_grad(F&& f, const Vector& x, double step = 1e-5) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_grad: step must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (Index j = 0; j < x.size(); ++j) {
    const double xj = x[j];
    probe[j] = xj + step;
    const double up = f(probe);
    probe[j] = xj - step;
    const double down = f(probe);
    probe[j] = xj;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw std::runtime_error("finite_diff_grad: non-finite function value");
    }
    grad[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

}  // namespace dat
