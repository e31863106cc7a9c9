#ifndef COTETHER_DIST_HPP
#define COTETHER_DIST_HPP

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cotether::dist {

// Parameters closer than this (relative) are rejected where distinctness is
// required; parameters within kEqualTol are treated as identical.
inline constexpr double kDistinctTol = 1e-6;
inline constexpr double kEqualTol = 1e-9;

class SinrDistribution;

// gamma = A / (1 + B), A ~ Exp(mean Y), B the sum of X i.i.d. Exp(mean Z).
struct FormAIid {
  int x;
  double y;
  double z;
};

// gamma = A / (1 + B), B the sum of independent exponentials with distinct
// means z[i].
struct FormAInd {
  double y;
  std::vector<double> z;
};

// gamma = A / (1 + B1 + B2) with two i.i.d. groups of sizes x1, x2 and
// distinct group means z1 != z2.
struct FormBIid {
  int x1;
  int x2;
  double y;
  double z1;
  double z2;
};

// gamma = A / (1 + B1 + B2), all means pairwise distinct within and across
// the two groups.
struct FormBInd {
  double y;
  std::vector<double> z1;
  std::vector<double> z2;
};

struct MinOf {
  std::shared_ptr<const SinrDistribution> left, right;
};

struct MaxOf {
  std::shared_ptr<const SinrDistribution> left, right;
};

// A closed-form SINR distribution: one of the two ratio families (in their
// i.i.d. / i.n.d. flavors) or a min/max composition of independent branches.
// Immutable after construction; evaluation is pure and re-entrant.
class SinrDistribution {
 public:
  using Variant = std::variant<FormAIid, FormAInd, FormBIid, FormBInd, MinOf, MaxOf>;

  explicit SinrDistribution(Variant v);

  static SinrDistribution form_a_iid(int x, double y, double z);
  static SinrDistribution form_a_ind(double y, std::vector<double> z);
  static SinrDistribution form_b_iid(int x1, int x2, double y, double z1, double z2);
  static SinrDistribution form_b_ind(double y, std::vector<double> z1, std::vector<double> z2);
  static SinrDistribution min_of(SinrDistribution left, SinrDistribution right);
  static SinrDistribution max_of(SinrDistribution left, SinrDistribution right);

  double pdf(double gamma) const;
  double cdf(double gamma) const;
  double survival(double gamma) const;  // 1 - cdf, stable in the far tail

  // Characteristic gamma scales for quadrature over (0, inf): the upper hint
  // is the desired-link mean (exponential tail scale), the lower one the
  // concentration scale Y / (1 + E[B]) where the pdf mass sits.
  double scale_hint() const;
  double low_scale_hint() const;

  const Variant& variant() const { return v_; }
  std::string describe() const;

 private:
  Variant v_;
};

enum class LinkKind { conventional, hybrid_direct, ap_phase1, ue_phase2 };

// Builds the SINR distribution for one link type from its desired-link mean
// and the interferer mean INR lists, applying the standard substitutions:
// form A for the single-group denominators (conventional, WLAN phase 2),
// form B for the two-group denominators (hybrid direct, relay phase 1).
// i.i.d. vs i.n.d. is selected by parameter equality; a form-B config whose
// two groups share one common mean collapses exactly to form A. Partially
// equal parameters are rejected as ill-conditioned.
SinrDistribution from_interference_config(LinkKind kind, double y,
                                          std::span<const double> z_primary,
                                          std::span<const double> z_secondary = {});

// max(eu, min(ea, au)): relay decode-and-forward end-to-end SINR combined
// with direct-link selection.
SinrDistribution end_to_end_distribution(SinrDistribution ea, SinrDistribution au,
                                         SinrDistribution eu);

// Interference-sum densities used in the derivations, exposed for validation.
double hypoexp_pdf(std::span<const double> z, double x);
double erlang_pdf(double z, int x, double t);
double sum_two_groups_pdf(int x1, double z1, int x2, double z2, double t);

// Expanded partial-fraction forms of the four ratio families. Algebraically
// identical to pdf()/cdf() but numerically fragile for large interferer
// counts or clustered means; kept as an independent evaluation route for
// cross-validation.
namespace tables {
double form_a_iid_pdf(int x, double y, double z, double g);
double form_a_iid_cdf(int x, double y, double z, double g);
double form_a_ind_pdf(double y, std::span<const double> z, double g);
double form_a_ind_cdf(double y, std::span<const double> z, double g);
double form_b_iid_pdf(int x1, int x2, double y, double z1, double z2, double g);
double form_b_iid_cdf(int x1, int x2, double y, double z1, double z2, double g);
double form_b_ind_pdf(double y, std::span<const double> z1, std::span<const double> z2, double g);
double form_b_ind_cdf(double y, std::span<const double> z1, std::span<const double> z2, double g);
}  // namespace tables

}  // namespace cotether::dist

#endif  // COTETHER_DIST_HPP
