#include "dat/attack.hpp"

namespace dat {

Vector fgsm(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y,
            const AttackConfig& cfg, SeededRng& rng) {
  if (cfg.kind != AttackKind::fgsm) throw std::invalid_argument("fgsm: config kind mismatch");
  return pgd_ascent([&](const Vector& d) { return grad_input(spec, theta, x + d, y); }, x.size(),
                    cfg, rng);
}

Vector pgd(const ModelSpec& spec, const LayeredParams& theta, const Vector& x, int y,
           const AttackConfig& cfg, SeededRng& rng) {
  if (cfg.kind != AttackKind::pgd) throw std::invalid_argument("pgd: config kind mismatch");
  return pgd_ascent([&](const Vector& d) { return grad_input(spec, theta, x + d, y); }, x.size(),
                    cfg, rng);
}

double quadratic_value(const QuadraticInnerSpec& spec, const Vector& delta) {
  return spec.linear_term.dot(delta) - 0.5 * spec.concavity * delta.squaredNorm();
}

Vector quadratic_grad_delta(const QuadraticInnerSpec& spec, const Vector& delta) {
  return spec.linear_term - spec.concavity * delta;
}

Vector exact_quadratic_max(const QuadraticInnerSpec& spec) {
  if (!(spec.concavity > 0.0)) {
    throw std::invalid_argument("exact_quadratic_max: concavity must be positive");
  }
  const Vector unconstrained = spec.linear_term / spec.concavity;
  return project_linf(unconstrained, Vector::Zero(unconstrained.size()), spec.epsilon);
}

GapReport approx_gap_check(const QuadraticInnerSpec& spec, const Vector& delta,
                           double eps_target) {
  GapReport report;
  const Vector g = quadratic_grad_delta(spec, delta);
  // max over ||d'||_inf <= eps of <d' - delta, g> has the closed form
  // eps * ||g||_1 - <delta, g>.
  report.gap_value = spec.epsilon * g.lpNorm<1>() - delta.dot(g);
  report.gap_tolerance =
      spec.concavity * eps_target / (spec.cross_lipschitz * spec.cross_lipschitz);
  report.is_eps_approx = report.gap_value <= report.gap_tolerance;

  const Vector best = exact_quadratic_max(spec);
  report.theta_grad_gap =
      spec.cross_lipschitz * spec.cross_lipschitz * (delta - best).squaredNorm();
  report.bound_holds = report.theta_grad_gap <= eps_target;
  return report;
}

}  // namespace dat
