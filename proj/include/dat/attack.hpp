#pragma once

#include <cmath>
#include <stdexcept>

#include "dat/geometry.hpp"
#include "dat/model.hpp"
#include "dat/rng.hpp"
#include "dat/types.hpp"

namespace dat {

enum class AttackKind { fgsm, pgd, exact_quadratic };
enum class AttackInit { zero, uniform };

struct AttackConfig {
  AttackKind kind = AttackKind::pgd;
  double epsilon = 0.0;
  int steps = 10;             // pgd iteration count; fgsm is a single step
  double step_size = 0.0;     // signed-ascent step alpha
  AttackInit init = AttackInit::zero;

  void validate() const {
    if (epsilon < 0.0) throw std::invalid_argument("AttackConfig: epsilon must be >= 0");
    if (kind != AttackKind::exact_quadratic) {
      if (!(step_size > 0.0) || !std::isfinite(step_size)) {
        throw std::invalid_argument("AttackConfig: step_size must be positive and finite");
      }
      if (steps < 1) throw std::invalid_argument("AttackConfig: steps must be >= 1");
      if (kind == AttackKind::fgsm && steps != 1) {
        throw std::invalid_argument("AttackConfig: fgsm implies a single step");
      }
    }
  }
};

inline Vector attack_init_delta(Index dim, const AttackConfig& cfg, SeededRng& rng) {
  Vector delta = Vector::Zero(dim);
  if (cfg.init == AttackInit::uniform) {
    for (Index j = 0; j < dim; ++j) delta[j] = rng.uniform(-cfg.epsilon, cfg.epsilon);
  }
  return delta;
}

// Signed gradient ascent with projection onto the epsilon ball around zero:
//   z_k = project(z_{k-1} + alpha * sign(grad(z_{k-1}))).
// grad is the gradient of the robust term w.r.t. the perturbation. The result
// always satisfies ||z||_inf <= epsilon.
template <typename GradFn>
Vector pgd_ascent(GradFn&& grad, Index dim, const AttackConfig& cfg, SeededRng& rng) {
  cfg.validate();
  const Vector center = Vector::Zero(dim);
  Vector z = project_linf(attack_init_delta(dim, cfg, rng), center, cfg.epsilon);
  const int iterations = cfg.kind == AttackKind::fgsm ? 1 : cfg.steps;
  for (int k = 0; k < iterations; ++k) {
    const Vector g = grad(z);
    if (g.size() != dim) throw std::invalid_argument("pgd_ascent: gradient dimension mismatch");
    Vector step = z;
    for (Index j = 0; j < dim; ++j) step[j] += cfg.step_size * sign_of(g[j]);
    z = project_linf(step, center, cfg.epsilon);
  }
  return z;
}

// One projected signed step on the cross-entropy of the perturbed input.
Vector fgsm(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y,
            const AttackConfig& cfg, SeededRng& rng);

// K projected signed steps; the returned point is feasible but per-step loss
// improvement is not guaranteed.
Vector pgd(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y,
           const AttackConfig& cfg, SeededRng& rng);

// Strongly concave toy inner problem
//   phi(delta) = g' delta - (mu/2) ||delta||^2
// coupled to parameters through theta = g / cross_lipschitz, i.e. the linear
// term is (A theta) with A = cross_lipschitz * I. That makes the
// theta-gradient of phi equal to cross_lipschitz * delta, so oracle-quality
// bounds are computable in closed form.
struct QuadraticInnerSpec {
  Vector linear_term;      // g
  double concavity = 1.0;  // mu > 0
  double cross_lipschitz = 1.0;
  double epsilon = 1.0;
};

double quadratic_value(const QuadraticInnerSpec& spec, const Vector& delta);
Vector quadratic_grad_delta(const QuadraticInnerSpec& spec, const Vector& delta);

// Componentwise clamp(g_j / mu, -eps, +eps): the exact constrained maximizer.
Vector exact_quadratic_max(const QuadraticInnerSpec& spec);

struct GapReport {
  bool is_eps_approx = false;   // first-order optimality gap within tolerance
  double gap_value = 0.0;       // max over the ball of <d' - delta, grad phi(delta)>
  double gap_tolerance = 0.0;   // mu * eps_target / L^2
  double theta_grad_gap = 0.0;  // || grad_theta phi(delta) - grad_theta phi(delta*) ||^2
  bool bound_holds = false;     // theta_grad_gap <= eps_target
};

// Checks how good an approximate inner solution is: evaluates the first-order
// optimality gap of delta against the (mu * eps_target / L^2) tolerance and
// the squared theta-gradient distance to the exact maximizer against
// eps_target. Any delta passing the gap check must satisfy the bound.
GapReport approx_gap_check(const QuadraticInnerSpec& spec, const Vector& delta, double eps_target);

}  // namespace dat
