#include "cotether/dist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cotether/errors.hpp"

namespace cotether::dist {

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kEqualTol * std::max(std::abs(a), std::abs(b));
}

void require_distinct(double a, double b, const char* what) {
  if (std::abs(a - b) < kDistinctTol * std::max(std::abs(a), std::abs(b)))
    throw IllConditionedError(std::string(what) + ": means " + std::to_string(a) + " and " +
                              std::to_string(b) + " are too close; perturb or use Monte Carlo");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

bool all_equal(std::span<const double> z) {
  for (double v : z)
    if (!nearly_equal(v, z.front())) return false;
  return true;
}

// One exponential-mean group of the interference denominator.
struct RateGroup {
  double z;
  int count;
};

// Every ratio leaf is A/(1 + sum of exponentials); only the grouping of the
// means differs between the four variants.
struct Groups {
  double y = 0.0;
  std::vector<RateGroup> groups;
};

Groups leaf_groups(const SinrDistribution::Variant& v) {
  Groups g;
  if (const auto* a = std::get_if<FormAIid>(&v)) {
    g.y = a->y;
    g.groups.push_back({a->z, a->x});
  } else if (const auto* ai = std::get_if<FormAInd>(&v)) {
    g.y = ai->y;
    for (double z : ai->z) g.groups.push_back({z, 1});
  } else if (const auto* b = std::get_if<FormBIid>(&v)) {
    g.y = b->y;
    g.groups.push_back({b->z1, b->x1});
    g.groups.push_back({b->z2, b->x2});
  } else if (const auto* bi = std::get_if<FormBInd>(&v)) {
    g.y = bi->y;
    for (double z : bi->z1) g.groups.push_back({z, 1});
    for (double z : bi->z2) g.groups.push_back({z, 1});
  } else {
    throw std::logic_error("leaf_groups: not a ratio leaf");
  }
  return g;
}

// log of the survival function exp(-g/y) * prod (1 + z g/y)^(-n).
double log_survival(const Groups& gr, double g) {
  double ls = -g / gr.y;
  for (const auto& t : gr.groups) ls -= t.count * std::log1p(t.z * g / gr.y);
  return ls;
}

double leaf_pdf(const Groups& gr, double g) {
  const double s = std::exp(log_survival(gr, g));
  double hazard = 1.0 / gr.y;
  for (const auto& t : gr.groups) hazard += t.count * (t.z / gr.y) / (1.0 + t.z * g / gr.y);
  return s * hazard;
}

void check_gamma(double g) {
  if (!(g >= 0.0)) throw std::domain_error("SinrDistribution: gamma must be >= 0");
}

}  // namespace

SinrDistribution::SinrDistribution(Variant v) : v_(std::move(v)) {
  if (const auto* a = std::get_if<FormAIid>(&v_)) {
    if (a->x < 1) throw std::invalid_argument("form A: X must be >= 1");
    require_positive(a->y, "form A: Y");
    require_positive(a->z, "form A: Z");
  } else if (const auto* ai = std::get_if<FormAInd>(&v_)) {
    if (ai->z.empty()) throw std::invalid_argument("form A i.n.d.: Z list must be non-empty");
    require_positive(ai->y, "form A: Y");
    for (double z : ai->z) require_positive(z, "form A: Z");
    for (std::size_t i = 0; i < ai->z.size(); ++i)
      for (std::size_t j = i + 1; j < ai->z.size(); ++j)
        require_distinct(ai->z[i], ai->z[j], "form A i.n.d.");
  } else if (const auto* b = std::get_if<FormBIid>(&v_)) {
    if (b->x1 < 1 || b->x2 < 1) throw std::invalid_argument("form B: X1, X2 must be >= 1");
    require_positive(b->y, "form B: Y");
    require_positive(b->z1, "form B: Z1");
    require_positive(b->z2, "form B: Z2");
    require_distinct(b->z1, b->z2, "form B i.i.d.");
  } else if (const auto* bi = std::get_if<FormBInd>(&v_)) {
    if (bi->z1.empty() || bi->z2.empty())
      throw std::invalid_argument("form B i.n.d.: Z lists must be non-empty");
    require_positive(bi->y, "form B: Y");
    std::vector<double> all;
    for (double z : bi->z1) { require_positive(z, "form B: Z1"); all.push_back(z); }
    for (double z : bi->z2) { require_positive(z, "form B: Z2"); all.push_back(z); }
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        require_distinct(all[i], all[j], "form B i.n.d.");
  } else if (const auto* m = std::get_if<MinOf>(&v_)) {
    if (!m->left || !m->right) throw std::invalid_argument("min_of: missing branch");
  } else if (const auto* m2 = std::get_if<MaxOf>(&v_)) {
    if (!m2->left || !m2->right) throw std::invalid_argument("max_of: missing branch");
  }
}

SinrDistribution SinrDistribution::form_a_iid(int x, double y, double z) {
  return SinrDistribution(FormAIid{x, y, z});
}
SinrDistribution SinrDistribution::form_a_ind(double y, std::vector<double> z) {
  return SinrDistribution(FormAInd{y, std::move(z)});
}
SinrDistribution SinrDistribution::form_b_iid(int x1, int x2, double y, double z1, double z2) {
  return SinrDistribution(FormBIid{x1, x2, y, z1, z2});
}
SinrDistribution SinrDistribution::form_b_ind(double y, std::vector<double> z1,
                                              std::vector<double> z2) {
  return SinrDistribution(FormBInd{y, std::move(z1), std::move(z2)});
}
SinrDistribution SinrDistribution::min_of(SinrDistribution left, SinrDistribution right) {
  return SinrDistribution(MinOf{std::make_shared<const SinrDistribution>(std::move(left)),
                                std::make_shared<const SinrDistribution>(std::move(right))});
}
SinrDistribution SinrDistribution::max_of(SinrDistribution left, SinrDistribution right) {
  return SinrDistribution(MaxOf{std::make_shared<const SinrDistribution>(std::move(left)),
                                std::make_shared<const SinrDistribution>(std::move(right))});
}

double SinrDistribution::pdf(double g) const {
  check_gamma(g);
  if (const auto* m = std::get_if<MinOf>(&v_))
    return m->left->pdf(g) * m->right->survival(g) + m->right->pdf(g) * m->left->survival(g);
  if (const auto* m = std::get_if<MaxOf>(&v_))
    return m->left->pdf(g) * m->right->cdf(g) + m->right->pdf(g) * m->left->cdf(g);
  return leaf_pdf(leaf_groups(v_), g);
}

double SinrDistribution::cdf(double g) const {
  check_gamma(g);
  if (const auto* m = std::get_if<MinOf>(&v_)) {
    const double fl = m->left->cdf(g), fr = m->right->cdf(g);
    return fl + fr - fl * fr;
  }
  if (const auto* m = std::get_if<MaxOf>(&v_)) return m->left->cdf(g) * m->right->cdf(g);
  return -std::expm1(log_survival(leaf_groups(v_), g));
}

double SinrDistribution::survival(double g) const {
  check_gamma(g);
  if (const auto* m = std::get_if<MinOf>(&v_)) return m->left->survival(g) * m->right->survival(g);
  if (const auto* m = std::get_if<MaxOf>(&v_)) {
    const double sl = m->left->survival(g), sr = m->right->survival(g);
    return sl + sr - sl * sr;
  }
  return std::exp(log_survival(leaf_groups(v_), g));
}

double SinrDistribution::scale_hint() const {
  if (const auto* m = std::get_if<MinOf>(&v_))
    return std::max(m->left->scale_hint(), m->right->scale_hint());
  if (const auto* m = std::get_if<MaxOf>(&v_))
    return std::max(m->left->scale_hint(), m->right->scale_hint());
  return leaf_groups(v_).y;
}

double SinrDistribution::low_scale_hint() const {
  if (const auto* m = std::get_if<MinOf>(&v_))
    return std::min(m->left->low_scale_hint(), m->right->low_scale_hint());
  if (const auto* m = std::get_if<MaxOf>(&v_))
    return std::min(m->left->low_scale_hint(), m->right->low_scale_hint());
  const auto gr = leaf_groups(v_);
  double mean_b = 0.0;
  for (const auto& t : gr.groups) mean_b += t.count * t.z;
  return gr.y / (1.0 + mean_b);
}

std::string SinrDistribution::describe() const {
  std::ostringstream os;
  if (const auto* a = std::get_if<FormAIid>(&v_)) {
    os << "form_a_iid{X=" << a->x << ", Y=" << a->y << ", Z=" << a->z << "}";
  } else if (const auto* ai = std::get_if<FormAInd>(&v_)) {
    os << "form_a_ind{Y=" << ai->y << ", Z=[";
    for (std::size_t i = 0; i < ai->z.size(); ++i) os << (i ? "," : "") << ai->z[i];
    os << "]}";
  } else if (const auto* b = std::get_if<FormBIid>(&v_)) {
    os << "form_b_iid{X1=" << b->x1 << ", X2=" << b->x2 << ", Y=" << b->y << ", Z1=" << b->z1
       << ", Z2=" << b->z2 << "}";
  } else if (const auto* bi = std::get_if<FormBInd>(&v_)) {
    os << "form_b_ind{Y=" << bi->y << ", Z1=[";
    for (std::size_t i = 0; i < bi->z1.size(); ++i) os << (i ? "," : "") << bi->z1[i];
    os << "], Z2=[";
    for (std::size_t i = 0; i < bi->z2.size(); ++i) os << (i ? "," : "") << bi->z2[i];
    os << "]}";
  } else if (const auto* m = std::get_if<MinOf>(&v_)) {
    os << "min_of{" << m->left->describe() << ", " << m->right->describe() << "}";
  } else if (const auto* m2 = std::get_if<MaxOf>(&v_)) {
    os << "max_of{" << m2->left->describe() << ", " << m2->right->describe() << "}";
  }
  return os.str();
}

namespace {

SinrDistribution single_group_config(double y, std::span<const double> z, const char* what) {
  if (z.empty()) throw std::invalid_argument(std::string(what) + ": interferer list is empty");
  if (all_equal(z))
    return SinrDistribution::form_a_iid(static_cast<int>(z.size()), y, z.front());
  return SinrDistribution::form_a_ind(y, std::vector<double>(z.begin(), z.end()));
}

SinrDistribution two_group_config(double y, std::span<const double> z1,
                                  std::span<const double> z2, const char* what) {
  if (z1.empty() || z2.empty())
    throw std::invalid_argument(std::string(what) + ": both interferer lists are required");
  const bool eq1 = all_equal(z1);
  const bool eq2 = all_equal(z2);
  if (eq1 && eq2) {
    // A shared mean across the two groups is exactly one larger i.i.d. sum.
    if (nearly_equal(z1.front(), z2.front()))
      return SinrDistribution::form_a_iid(static_cast<int>(z1.size() + z2.size()), y, z1.front());
    return SinrDistribution::form_b_iid(static_cast<int>(z1.size()), static_cast<int>(z2.size()),
                                        y, z1.front(), z2.front());
  }
  return SinrDistribution::form_b_ind(y, std::vector<double>(z1.begin(), z1.end()),
                                      std::vector<double>(z2.begin(), z2.end()));
}

}  // namespace

SinrDistribution from_interference_config(LinkKind kind, double y,
                                          std::span<const double> z_primary,
                                          std::span<const double> z_secondary) {
  require_positive(y, "from_interference_config: Y");
  switch (kind) {
    case LinkKind::conventional:
      return single_group_config(y, z_primary, "conventional");
    case LinkKind::ue_phase2:
      return single_group_config(y, z_primary, "ue_phase2");
    case LinkKind::hybrid_direct:
      return two_group_config(y, z_primary, z_secondary, "hybrid_direct");
    case LinkKind::ap_phase1:
      return two_group_config(y, z_primary, z_secondary, "ap_phase1");
  }
  throw std::invalid_argument("from_interference_config: unknown link kind");
}

SinrDistribution end_to_end_distribution(SinrDistribution ea, SinrDistribution au,
                                         SinrDistribution eu) {
  return SinrDistribution::max_of(std::move(eu),
                                  SinrDistribution::min_of(std::move(ea), std::move(au)));
}

double hypoexp_pdf(std::span<const double> z, double x) {
  if (z.empty()) throw std::invalid_argument("hypoexp_pdf: empty rate list");
  if (x < 0.0) return 0.0;
  for (double v : z) require_positive(v, "hypoexp_pdf: Z");
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) require_distinct(z[i], z[j], "hypoexp_pdf");
  double prod_inv = 1.0;
  for (double v : z) prod_inv /= v;
  double sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    double den = 1.0;
    for (std::size_t l = 0; l < z.size(); ++l)
      if (l != j) den *= 1.0 / z[l] - 1.0 / z[j];
    sum += std::exp(-x / z[j]) / den;
  }
  return prod_inv * sum;
}

double erlang_pdf(double z, int x, double t) {
  require_positive(z, "erlang_pdf: Z");
  if (x < 1) throw std::invalid_argument("erlang_pdf: X must be >= 1");
  if (t < 0.0) return 0.0;
  if (t == 0.0) return x == 1 ? 1.0 / z : 0.0;
  return std::exp(-x * std::log(z) - std::lgamma(x) + (x - 1) * std::log(t) - t / z);
}

namespace {

// Gamma(n) - Gamma(n, w) for integer n >= 1 through the finite series
// Gamma(n, w) = (n-1)! e^(-w) sum_{m<n} w^m/m!; valid for negative w as well.
double lower_gamma_int(int n, double w) {
  double s = 1.0;
  double term = 1.0;
  for (int m = 1; m < n; ++m) {
    term *= w / m;
    s += term;
  }
  return std::tgamma(static_cast<double>(n)) * (1.0 - std::exp(-w) * s);
}

}  // namespace

double sum_two_groups_pdf(int x1, double z1, int x2, double z2, double t) {
  require_positive(z1, "sum_two_groups_pdf: Z1");
  require_positive(z2, "sum_two_groups_pdf: Z2");
  if (x1 < 1 || x2 < 1) throw std::invalid_argument("sum_two_groups_pdf: X1, X2 must be >= 1");
  require_distinct(z1, z2, "sum_two_groups_pdf");
  if (t < 0.0) return 0.0;
  if (t == 0.0) return 0.0;
  const double delta = 1.0 / z1 - 1.0 / z2;
  const double c =
      std::exp(-x2 * std::log(z2) - std::lgamma(x2) - x1 * std::log(z1) - std::lgamma(x1));
  double sum = 0.0;
  double binom = 1.0;  // C(x2-1, j)
  for (int j = 0; j <= x2 - 1; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += binom * std::pow(t, x2 - 1 - j) * sign / std::pow(delta, j + x1) *
           lower_gamma_int(j + x1, delta * t);
    binom *= static_cast<double>(x2 - 1 - j) / (j + 1);
  }
  return c * std::exp(-t / z2) * sum;
}

namespace tables {

double form_a_iid_pdf(int x, double y, double z, double g) {
  const double s = g / y + 1.0 / z;
  return std::pow(z, -x) * std::exp(-g / y) / y * std::pow(s, -x) * (1.0 + x / s);
}

double form_a_iid_cdf(int x, double y, double z, double g) {
  const double s = g / y + 1.0 / z;
  return 1.0 - std::pow(z, -x) * std::pow(s, -x) * std::exp(-g / y);
}

namespace {

// Hypoexponential partial-fraction weight prod(1/Z_i) / prod_{l!=j}(1/Z_l - 1/Z_j).
double hypoexp_weight(std::span<const double> z, std::size_t j) {
  double w = 1.0;
  for (double v : z) w /= v;
  for (std::size_t l = 0; l < z.size(); ++l)
    if (l != j) w /= 1.0 / z[l] - 1.0 / z[j];
  return w;
}

}  // namespace

double form_a_ind_pdf(double y, std::span<const double> z, double g) {
  double sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double s = g / y + 1.0 / z[j];
    sum += hypoexp_weight(z, j) * (1.0 / s + 1.0 / (s * s));
  }
  return std::exp(-g / y) / y * sum;
}

double form_a_ind_cdf(double y, std::span<const double> z, double g) {
  double sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) sum += hypoexp_weight(z, j) / (g / y + 1.0 / z[j]);
  return 1.0 - std::exp(-g / y) * sum;
}

double form_b_ind_pdf(double y, std::span<const double> z1, std::span<const double> z2,
                      double g) {
  double sum = 0.0;
  for (std::size_t j1 = 0; j1 < z1.size(); ++j1)
    for (std::size_t j2 = 0; j2 < z2.size(); ++j2) {
      const double k = hypoexp_weight(z1, j1) * hypoexp_weight(z2, j2) * z1[j1] * z2[j2] /
                       (z1[j1] - z2[j2]);
      const double s1 = g / y + 1.0 / z1[j1];
      const double s2 = g / y + 1.0 / z2[j2];
      sum += k * (1.0 / s1 + 1.0 / (s1 * s1) - 1.0 / s2 - 1.0 / (s2 * s2));
    }
  return std::exp(-g / y) / y * sum;
}

double form_b_ind_cdf(double y, std::span<const double> z1, std::span<const double> z2,
                      double g) {
  double sum = 0.0;
  for (std::size_t j1 = 0; j1 < z1.size(); ++j1)
    for (std::size_t j2 = 0; j2 < z2.size(); ++j2) {
      const double k = hypoexp_weight(z1, j1) * hypoexp_weight(z2, j2) * z1[j1] * z2[j2] /
                       (z1[j1] - z2[j2]);
      sum += k * (1.0 / (g / y + 1.0 / z1[j1]) - 1.0 / (g / y + 1.0 / z2[j2]));
    }
  return 1.0 - std::exp(-g / y) * sum;
}

double form_b_iid_pdf(int x1, int x2, double y, double z1, double z2, double g) {
  const double delta = 1.0 / z1 - 1.0 / z2;
  const double s1 = g / y + 1.0 / z1;
  const double s2 = g / y + 1.0 / z2;
  const double c =
      std::exp(-x2 * std::log(z2) - std::lgamma(x2) - x1 * std::log(z1) - std::lgamma(x1));
  double total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= x2 - 1; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double inner = std::tgamma(static_cast<double>(x2 - j)) * std::pow(s2, j - x2) *
                   (1.0 + (x2 - j) / s2);
    double dm = 1.0;  // delta^m / m!
    for (int m = 0; m <= x1 + j - 1; ++m) {
      inner -= dm * std::tgamma(static_cast<double>(x2 - j + m)) * std::pow(s1, -(x2 - j + m)) *
               (1.0 + (x2 - j + m) / s1);
      dm *= delta / (m + 1);
    }
    total += binom * sign * std::tgamma(static_cast<double>(x1 + j)) /
             std::pow(delta, x1 + j) * inner;
    binom *= static_cast<double>(x2 - 1 - j) / (j + 1);
  }
  return std::exp(-g / y) / y * c * total;
}

double form_b_iid_cdf(int x1, int x2, double y, double z1, double z2, double g) {
  const double delta = 1.0 / z1 - 1.0 / z2;
  const double s1 = g / y + 1.0 / z1;
  const double s2 = g / y + 1.0 / z2;
  const double c =
      std::exp(-x2 * std::log(z2) - std::lgamma(x2) - x1 * std::log(z1) - std::lgamma(x1));
  double total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= x2 - 1; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double inner = std::tgamma(static_cast<double>(x2 - j)) * std::pow(s2, j - x2);
    double dm = 1.0;
    for (int m = 0; m <= x1 + j - 1; ++m) {
      inner -= dm * std::tgamma(static_cast<double>(x2 - j + m)) * std::pow(s1, -(x2 - j + m));
      dm *= delta / (m + 1);
    }
    total += binom * sign * std::tgamma(static_cast<double>(x1 + j)) /
             std::pow(delta, x1 + j) * inner;
    binom *= static_cast<double>(x2 - 1 - j) / (j + 1);
  }
  return 1.0 - std::exp(-g / y) * c * total;
}

}  // namespace tables

}  // namespace cotether::dist
