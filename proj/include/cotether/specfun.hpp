#ifndef COTETHER_SPECFUN_HPP
#define COTETHER_SPECFUN_HPP

#include <cstddef>
#include <vector>

namespace cotether::specfun {

// Poles closer than this (relative) are rejected as ill-conditioned.
inline constexpr double kPoleDistinctTol = 1e-6;

// One factor (x + a)^(-b) of a rational product, a > 0, b >= 1.
struct PoleTerm {
  double a = 0.0;
  int b = 1;
};

// Product over distinct poles: prod_j (x + a_j)^(-b_j).
class RationalProduct {
 public:
  explicit RationalProduct(std::vector<PoleTerm> poles,
                           double distinct_tol = kPoleDistinctTol);

  const std::vector<PoleTerm>& poles() const { return poles_; }
  int total_order() const;
  double operator()(double x) const;

 private:
  std::vector<PoleTerm> poles_;
};

// One partial-fraction term xi / (x + a_pole)^order.
struct ResidueTerm {
  std::size_t pole = 0;  // index into the originating product's pole list
  int order = 1;         // 1 .. b_pole
  double xi = 0.0;
};

struct ResidueExpansion {
  std::vector<PoleTerm> poles;  // copy of the expanded product's poles
  std::vector<ResidueTerm> terms;

  // Evaluates sum_j,h xi_{j,h} / (x + a_j)^h; equals the original product.
  double operator()(double x) const;
};

// Partial-fraction coefficients of a rational product, computed through the
// logarithmic-derivative recurrence (no symbolic algebra).
ResidueExpansion residue_expand(const RationalProduct& p);

// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt for any
// real a and x > 0. For a <= 0 the value is computed by stable downward
// recurrence (or the continued fraction when x is large enough).
double upper_incomplete_gamma(double a, double x);

// exp(x) * Gamma(a, x); avoids underflow of the plain function when x is
// large and a prefactor exp(x) is known to cancel it.
double upper_incomplete_gamma_scaled(double a, double x);

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x);

// Tricomi confluent hypergeometric function U(a, b, z) for a > 0, z > 0 and
// any real b (non-positive integers included). b < 1 is lifted to b >= 1 by
// the Kummer transformation, then the integral representation is evaluated
// by adaptive quadrature.
double tricomi_u(double a, double b, double z);

// T1(p, c, B) = int_0^inf exp(-(B + c) x) prod_j (x + a_j)^(-b_j) dx.
// Requires B + c > 0 (the integral diverges at B + c = 0 for total order 1,
// and the closed form assumes a positive decay rate).
double t1_solve(const RationalProduct& p, double c_sum, double b_decay);

// T2(p, c) = int_0^inf x exp(-c x) prod_j (x + a_j)^(-b_j) dx, c > 0.
double t2_solve(const RationalProduct& p, double c_sum);

// T3(p, c, d) = int_0^inf x^d exp(-c x) prod_j (x + a_j)^(-b_j) dx, c > 0,
// d >= 0. t2_solve(p, c) == t3_solve(p, c, 1).
double t3_solve(const RationalProduct& p, double c_sum, int d);

}  // namespace cotether::specfun

#endif  // COTETHER_SPECFUN_HPP
