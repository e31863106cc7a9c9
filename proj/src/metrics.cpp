#include "cotether/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cotether/quadrature.hpp"
#include "cotether/specfun.hpp"

namespace cotether::metrics {

namespace {

void check_modulation(ModulationParams m) {
  if (!(m.a > 0.0) || m.a > 1.0)
    throw std::invalid_argument("modulation: A must lie in (0, 1]");
  if (!(m.b > 0.0)) throw std::invalid_argument("modulation: B must be positive");
}

void check_capacity(CapacityParams p) {
  if (p.n_hops < 1) throw std::invalid_argument("capacity: NH must be >= 1");
  if (!(p.quad_rel_tol > 0.0)) throw std::invalid_argument("capacity: bad tolerance");
}

// A (1 + B Y)^(X-1) Z^(-X) e^w [Gamma(1-X, w) + X (1+BY) Gamma(-X, w)] with
// w = (1 + B Y) / Z; both gamma terms are positive, so there is no
// cancellation.
double abep_form_a_iid(const dist::FormAIid& fa, ModulationParams m) {
  const double beta = 1.0 + m.b * fa.y;
  const double w = beta / fa.z;
  const double g1 = specfun::upper_incomplete_gamma_scaled(1.0 - fa.x, w);
  const double g2 = specfun::upper_incomplete_gamma_scaled(-static_cast<double>(fa.x), w);
  const double lead = m.a * std::exp((fa.x - 1) * std::log(beta) - fa.x * std::log(fa.z));
  return lead * (g1 + fa.x * beta * g2);
}

// Y/Z^2 U(2, 3-X, 1/Z) + X Y/Z U(2, 2-X, 1/Z).
double mean_form_a_iid(const dist::FormAIid& fa) {
  const double w = 1.0 / fa.z;
  return fa.y / (fa.z * fa.z) * specfun::tricomi_u(2.0, 3.0 - fa.x, w) +
         fa.x * fa.y / fa.z * specfun::tricomi_u(2.0, 2.0 - fa.x, w);
}

}  // namespace

ModulationParams modulation_preset(std::string_view name) {
  if (name == "dbpsk") return {0.5, 1.0};
  if (name == "ncfsk") return {0.5, 0.5};
  if (name == "bpsk-approx") return {0.25, 4.0 / 3.0};
  throw std::invalid_argument("unknown modulation preset '" + std::string(name) + "'");
}

double abep_quadrature(const dist::SinrDistribution& d, ModulationParams m, double rel_tol) {
  check_modulation(m);
  auto integrand = [&](double g) { return std::exp(-m.b * g) * d.pdf(g); };
  const auto r = quad::integrate_log_scale(integrand, d.low_scale_hint(),
                                           std::min(d.scale_hint(), 50.0 / m.b), rel_tol, 15);
  return m.a * quad::require_converged(r, 1e-6, "abep", 1e-12);
}

double abep(const dist::SinrDistribution& d, ModulationParams m) {
  check_modulation(m);
  if (const auto* fa = std::get_if<dist::FormAIid>(&d.variant())) return abep_form_a_iid(*fa, m);
  return abep_quadrature(d, m);
}

double mean_sinr_quadrature(const dist::SinrDistribution& d, double rel_tol) {
  auto integrand = [&](double g) { return g * d.pdf(g); };
  const auto r =
      quad::integrate_log_scale(integrand, d.low_scale_hint(), d.scale_hint(), rel_tol, 15);
  return quad::require_converged(r, 1e-6, "mean_sinr", 1e-12);
}

double mean_sinr(const dist::SinrDistribution& d) {
  if (const auto* fa = std::get_if<dist::FormAIid>(&d.variant())) return mean_form_a_iid(*fa);
  return mean_sinr_quadrature(d);
}

double ergodic_capacity(const dist::SinrDistribution& d, CapacityParams p) {
  check_capacity(p);
  auto integrand = [&](double g) { return std::log2(1.0 + g) * d.pdf(g); };
  const auto r = quad::integrate_log_scale(integrand, d.low_scale_hint(), d.scale_hint(),
                                           p.quad_rel_tol, 15);
  return quad::require_converged(r, 1e-6, "ergodic_capacity", 1e-12) / p.n_hops;
}

double capacity_upper_bound(const dist::SinrDistribution& d, CapacityParams p) {
  check_capacity(p);
  return std::log2(1.0 + mean_sinr(d)) / p.n_hops;
}

double outage_probability(const dist::SinrDistribution& d, double gamma_th) {
  if (!(gamma_th >= 0.0)) throw std::domain_error("outage_probability: threshold must be >= 0");
  return d.cdf(gamma_th);
}

}  // namespace cotether::metrics
