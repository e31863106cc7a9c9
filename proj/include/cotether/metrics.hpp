#ifndef COTETHER_METRICS_HPP
#define COTETHER_METRICS_HPP

#include <string_view>

#include "cotether/dist.hpp"

namespace cotether::metrics {

// P(error | gamma) = A exp(-B gamma).
struct ModulationParams {
  double a = 0.5;
  double b = 1.0;
};

// Shipped (A, B) pairs: "dbpsk" (0.5, 1) exact, "ncfsk" (0.5, 0.5) exact,
// "bpsk-approx" (0.25, 4/3) single-exponential approximation of Q(sqrt(2g)).
ModulationParams modulation_preset(std::string_view name);

struct CapacityParams {
  int n_hops = 1;             // 1 direct, 2 relayed
  double quad_rel_tol = 1e-10;
};

// A int_0^inf exp(-B g) f(g) dg. Closed form for the i.i.d. form-A family,
// adaptive quadrature otherwise; the two routes agree to ~1e-6 relative.
double abep(const dist::SinrDistribution& d, ModulationParams m);

// int g f(g) dg. Closed form (two Tricomi terms) for the i.i.d. form-A
// family, quadrature otherwise.
double mean_sinr(const dist::SinrDistribution& d);

// (1/NH) int log2(1+g) f(g) dg by adaptive quadrature.
double ergodic_capacity(const dist::SinrDistribution& d, CapacityParams p);

// Jensen bound (1/NH) log2(1 + mean); always >= ergodic_capacity.
double capacity_upper_bound(const dist::SinrDistribution& d, CapacityParams p);

// cdf at the threshold.
double outage_probability(const dist::SinrDistribution& d, double gamma_th);

// Definitional-integral routes with no closed-form shortcuts; the fast paths
// above must match these. Exposed for validation.
double abep_quadrature(const dist::SinrDistribution& d, ModulationParams m,
                       double rel_tol = 1e-10);
double mean_sinr_quadrature(const dist::SinrDistribution& d, double rel_tol = 1e-10);

}  // namespace cotether::metrics

#endif  // COTETHER_METRICS_HPP
