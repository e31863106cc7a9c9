#include "cotether/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cotether/errors.hpp"
#include "cotether/quadrature.hpp"

namespace cotether::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kLogDblMax = 709.0;
constexpr int kMaxIter = 20000;

double pow_checked(double x, double e) {
  const double lp = e * std::log(x);
  if (lp > kLogDblMax)
    throw std::overflow_error("specfun: x^" + std::to_string(e) + " overflows for x = " +
                              std::to_string(x));
  return std::exp(lp);
}

// Continued fraction (modified Lentz) for H(a, x) = exp(x) x^(-a) Gamma(a, x).
// Reliable for x >= a + 1 and, for a <= 0, whenever x is not small.
double gamma_cf_h(double a, double x) {
  const double tiny = 1e-300;
  const double eps = std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  int settled = 0;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    // require two consecutive settled steps; a single tiny increment can
    // appear well before the fraction has actually converged
    settled = (std::abs(del - 1.0) <= eps) ? settled + 1 : 0;
    if (settled >= 2) return h;
  }
  throw ConvergenceError("upper_incomplete_gamma: continued fraction stalled", std::abs(h));
}

// Series for the scaled lower incomplete gamma:
// exp(x) gamma_lower(a, x) = x^a sum_{n>=0} x^n / (a (a+1) ... (a+n)),
// convergent and stable for 0 < a, x < a + 1.
double lower_series_scaled(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * std::numeric_limits<double>::epsilon())
      return pow_checked(x, a) * sum;
  }
  throw ConvergenceError("upper_incomplete_gamma: series stalled", std::abs(sum));
}

// exp(x) Gamma(a, x) for a > 0.
double scaled_positive(double a, double x) {
  if (x >= a + 1.0) return pow_checked(x, a) * gamma_cf_h(a, x);
  const double lg = std::lgamma(a);
  if (lg + x > kLogDblMax)
    throw std::overflow_error("upper_incomplete_gamma: exp(x)*Gamma(a) overflows");
  return std::exp(lg + x) - lower_series_scaled(a, x);
}

// exp(x) E1(x). Power series below the continued-fraction regime.
double e1_scaled(double x) {
  if (x >= 1.0) return gamma_cf_h(0.0, x);
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= kMaxIter; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::abs(add) < std::abs(sum + 1.0) * std::numeric_limits<double>::epsilon()) break;
  }
  return std::exp(x) * (-kEulerGamma - std::log(x) + sum);
}

// exp(x) Gamma(a, x) for a <= 0 by downward recurrence
// Gs(b - 1, x) = (Gs(b, x) - x^(b-1)) / (b - 1), starting from E1 (integer a)
// or from the fractional part of a in (0, 1).
double scaled_nonpositive(double a, double x) {
  // The continued fraction is direct and avoids the recurrence's subtractive
  // cancellation; it converges for any a <= 0 once x is not small.
  if (x >= 1.5) return pow_checked(x, a) * gamma_cf_h(a, x);

  const double frac = a - std::floor(a);
  double cur;
  double g;
  long steps;
  if (frac == 0.0) {
    cur = 0.0;
    g = e1_scaled(x);
    steps = std::lround(-a);
  } else {
    cur = frac;
    g = scaled_positive(frac, x);
    steps = std::lround(frac - a);
  }
  for (long k = 0; k < steps; ++k) {
    g = (g - pow_checked(x, cur - 1.0)) / (cur - 1.0);
    cur -= 1.0;
  }
  return g;
}

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

RationalProduct::RationalProduct(std::vector<PoleTerm> poles, double distinct_tol)
    : poles_(std::move(poles)) {
  if (poles_.empty()) throw std::invalid_argument("RationalProduct: no poles");
  for (const auto& p : poles_) {
    if (!(p.a > 0.0)) throw std::invalid_argument("RationalProduct: pole offsets must be positive");
    if (p.b < 1) throw std::invalid_argument("RationalProduct: pole orders must be >= 1");
  }
  for (std::size_t i = 0; i < poles_.size(); ++i)
    for (std::size_t j = i + 1; j < poles_.size(); ++j) {
      const double scale = std::max(poles_[i].a, poles_[j].a);
      if (std::abs(poles_[i].a - poles_[j].a) < distinct_tol * scale)
        throw IllConditionedError("RationalProduct: poles " + std::to_string(poles_[i].a) +
                                  " and " + std::to_string(poles_[j].a) +
                                  " are too close for a stable expansion");
    }
}

int RationalProduct::total_order() const {
  int n = 0;
  for (const auto& p : poles_) n += p.b;
  return n;
}

double RationalProduct::operator()(double x) const {
  double v = 1.0;
  for (const auto& p : poles_) v *= std::pow(x + p.a, -p.b);
  return v;
}

double ResidueExpansion::operator()(double x) const {
  double v = 0.0;
  for (const auto& t : terms) v += t.xi * std::pow(x + poles[t.pole].a, -t.order);
  return v;
}

ResidueExpansion residue_expand(const RationalProduct& p) {
  const auto& poles = p.poles();
  ResidueExpansion out;
  out.poles = poles;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const double x0 = -poles[j].a;
    const int bj = poles[j].b;
    const int nmax = bj - 1;

    // g(x) = prod_{q != j} (x + a_q)^(-b_q); derivatives at x0 follow from
    // g' = L0 g with L_k the k-th derivative of (ln g)'.
    std::vector<double> g(nmax + 1, 0.0);
    double g0 = 1.0;
    for (std::size_t q = 0; q < poles.size(); ++q)
      if (q != j) g0 *= std::pow(x0 + poles[q].a, -poles[q].b);
    g[0] = g0;

    std::vector<double> lderiv(std::max(nmax, 1), 0.0);
    for (int k = 0; k < nmax; ++k) {
      double s = 0.0;
      double kfact_sign = (k % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t q = 0; q < poles.size(); ++q) {
        if (q == j) continue;
        s += -poles[q].b * kfact_sign * std::tgamma(k + 1.0) /
             std::pow(x0 + poles[q].a, k + 1.0);
      }
      lderiv[k] = s;
    }
    for (int n = 1; n <= nmax; ++n) {
      double s = 0.0;
      for (int k = 0; k <= n - 1; ++k)
        s += std::exp(log_binomial(n - 1, k)) * lderiv[k] * g[n - 1 - k];
      g[n] = s;
    }

    for (int h = 1; h <= bj; ++h) {
      const int d = bj - h;
      out.terms.push_back({j, h, g[d] / std::tgamma(d + 1.0)});
    }
  }
  return out;
}

double upper_incomplete_gamma_scaled(double a, double x) {
  if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be positive");
  if (a > 0.0) return scaled_positive(a, x);
  return scaled_nonpositive(a, x);
}

double upper_incomplete_gamma(double a, double x) {
  const double s = upper_incomplete_gamma_scaled(a, x);
  if (s <= 0.0) return 0.0;
  // Multiply by exp(-x) in log space so large x degrades gracefully.
  return std::exp(std::log(s) - x);
}

double expint_e1(double x) { return upper_incomplete_gamma(0.0, x); }

namespace {

// U(a, b, z) for b >= 1 via the integral representation
// U = z^(-a) / Gamma(a) * int_0^inf e^(-s) s^(a-1) (1 + s/z)^(b-a-1) ds.
double tricomi_u_integral(double a, double b, double z) {
  const double power = b - a - 1.0;
  auto integrand = [a, power, z](double s) -> double {
    if (s <= 0.0) return 0.0;
    const double lv = -s + (a - 1.0) * std::log(s) + power * std::log1p(s / z);
    return std::exp(lv);
  };
  // Peak of e^(-s) s^(a-1) sits near a-1; a positive outer power pushes the
  // mass further out.
  const double scale = std::max(1.0, a - 1.0 + std::max(0.0, power));
  const auto r = quad::integrate_semi_inf<31>(integrand, scale, 1e-14, 15);
  // The Kronrod error estimate is a loose bound for smooth integrands; gate
  // only against gross non-convergence.
  const double ival = quad::require_converged(r, 1e-8, "tricomi_u", 1e-305);
  const double lu = -a * std::log(z) - std::lgamma(a) + std::log(ival);
  if (lu > kLogDblMax) throw std::overflow_error("tricomi_u: result overflows");
  return std::exp(lu);
}

}  // namespace

double tricomi_u(double a, double b, double z) {
  if (!(a > 0.0)) throw std::domain_error("tricomi_u: a must be positive");
  if (!(z > 0.0)) throw std::domain_error("tricomi_u: z must be positive");
  if (b >= 1.0) return tricomi_u_integral(a, b, z);
  // Kummer transformation U(a,b,z) = z^(1-b) U(a-b+1, 2-b, z); 2-b >= 1 here.
  const double lp = (1.0 - b) * std::log(z);
  if (lp > kLogDblMax) throw std::overflow_error("tricomi_u: Kummer prefactor overflows");
  return std::exp(lp) * tricomi_u_integral(a - b + 1.0, 2.0 - b, z);
}

double t1_solve(const RationalProduct& p, double c_sum, double b_decay) {
  if (c_sum < 0.0 || b_decay < 0.0)
    throw std::invalid_argument("t1_solve: decay constants must be non-negative");
  const double beta = b_decay + c_sum;
  if (!(beta > 0.0))
    throw std::domain_error("t1_solve: B + sum(c) must be positive (integral diverges)");
  const auto xi = residue_expand(p);
  double sum = 0.0;
  for (const auto& t : xi.terms) {
    const double a = p.poles()[t.pole].a;
    sum += t.xi * std::pow(beta, t.order - 1) *
           upper_incomplete_gamma_scaled(1.0 - t.order, a * beta);
  }
  return sum;
}

double t3_solve(const RationalProduct& p, double c_sum, int d) {
  if (!(c_sum > 0.0)) throw std::domain_error("t3_solve: sum(c) must be positive");
  if (d < 0) throw std::invalid_argument("t3_solve: power must be non-negative");
  const auto xi = residue_expand(p);
  const double dfact = std::tgamma(d + 1.0);
  double sum = 0.0;
  for (const auto& t : xi.terms) {
    const double a = p.poles()[t.pole].a;
    sum += t.xi * dfact * std::pow(a, d + 1.0 - t.order) *
           tricomi_u(d + 1.0, d + 2.0 - t.order, a * c_sum);
  }
  return sum;
}

double t2_solve(const RationalProduct& p, double c_sum) { return t3_solve(p, c_sum, 1); }

}  // namespace cotether::specfun
