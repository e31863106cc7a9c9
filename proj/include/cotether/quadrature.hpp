#ifndef COTETHER_QUADRATURE_HPP
#define COTETHER_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>
#include <utility>

#include "cotether/errors.hpp"

namespace cotether::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

// Adaptive Gauss-Kronrod on a finite interval.
template <unsigned Points = 15, class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-10, int max_depth = 15) {
  using GK = boost::math::quadrature::gauss_kronrod<double, Points>;
  double err = 0.0;
  double v = GK::integrate(std::forward<F>(f), a, b, max_depth, rel_tol, &err);
  return {v, err};
}

// Integral over [0, inf) through the substitution x = scale * u / (1 - u).
// `scale` should be a characteristic decay length of the integrand so the
// mass lands well inside (0, 1). Non-finite integrand values in the far tail
// (underflow artifacts) are treated as zero.
template <unsigned Points = 15, class F>
Result integrate_semi_inf(F&& f, double scale = 1.0, double rel_tol = 1e-10,
                          int max_depth = 15) {
  auto g = [&f, scale](double u) -> double {
    const double om = 1.0 - u;
    if (!(om > 0.0)) return 0.0;
    const double x = scale * u / om;
    if (!std::isfinite(x)) return 0.0;
    const double r = f(x) * (scale / (om * om));
    return std::isfinite(r) ? r : 0.0;
  };
  return integrate<Points>(g, 0.0, 1.0, rel_tol, max_depth);
}

// Integral over (0, inf) through gamma = e^t, robust when the integrand's
// mass spreads over many decades between lo_scale and hi_scale.
template <unsigned Points = 15, class F>
Result integrate_log_scale(F&& f, double lo_scale, double hi_scale, double rel_tol = 1e-10,
                           int max_depth = 15) {
  const double lo = std::log(std::min(lo_scale, hi_scale)) - 40.0;
  const double hi = std::log(std::max(lo_scale, hi_scale)) + 14.0;
  auto g = [&f](double t) -> double {
    const double x = std::exp(t);
    const double r = f(x) * x;
    return std::isfinite(r) ? r : 0.0;
  };
  return integrate<Points>(g, lo, hi, rel_tol, max_depth);
}

// Returns the value or throws ConvergenceError carrying the achieved error.
inline double require_converged(const Result& r, double rel_tol, const std::string& what,
                                double abs_floor = 1e-14) {
  if (!std::isfinite(r.value))
    throw ConvergenceError(what + ": quadrature produced a non-finite value", r.error);
  const double bound = std::max(rel_tol * std::abs(r.value), abs_floor);
  if (r.error > bound)
    throw ConvergenceError(what + ": quadrature error " + std::to_string(r.error) +
                               " above tolerance",
                           r.error);
  return r.value;
}

}  // namespace cotether::quad

#endif  // COTETHER_QUADRATURE_HPP
