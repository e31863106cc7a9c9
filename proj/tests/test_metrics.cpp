#include "cotether/metrics.hpp"

#include <cmath>
#include <doctest.h>
#include <stdexcept>

#include "cotether/dist.hpp"
#include "support/oracle.hpp"

using namespace cotether::metrics;
using cotether::dist::SinrDistribution;
using oracle::rel_err;

TEST_SUITE_BEGIN("metrics");

namespace {

SinrDistribution hybrid_tot() {
  return cotether::dist::end_to_end_distribution(
      SinrDistribution::form_b_iid(2, 2, 50.0, 1.0, 3.0),
      SinrDistribution::form_a_iid(2, 40.0, 2.0),
      SinrDistribution::form_b_iid(1, 2, 60.0, 0.5, 4.0));
}

}  // namespace

TEST_CASE("abep: vanishing B recovers the pdf normalization") {
  const auto d = SinrDistribution::form_a_iid(2, 10.0, 1.0);
  CHECK(std::abs(abep(d, {1.0, 1e-12}) - 1.0) < 1e-6);
}

TEST_CASE("abep: frozen value and closed-form/quadrature agreement") {
  // FormA_iid{X=2, Y=10, Z=1}, DBPSK (A=0.5, B=1): frozen 0.11129783731902728
  const auto d = SinrDistribution::form_a_iid(2, 10.0, 1.0);
  const auto m = modulation_preset("dbpsk");
  const double closed = abep(d, m);
  CHECK(rel_err(closed, 0.11129783731902728) < 1e-10);
  CHECK(rel_err(abep_quadrature(d, m), closed) < 1e-6);
  // independent Simpson oracle of the defining integral
  const double simpson = 0.5 * oracle::integrate_semi_inf(
                                   [&](double g) { return std::exp(-g) * d.pdf(g); }, 1.0);
  CHECK(rel_err(closed, simpson) < 1e-9);
}

TEST_CASE("abep: closed form tracks quadrature across a randomized i.i.d. suite") {
  oracle::Rng rng(5150);
  for (int i = 0; i < 25; ++i) {
    const int x = rng.uniform_int(1, 24);
    const double y = rng.log_uniform(0.1, 1e4);
    const double z = rng.log_uniform(0.1, 1e4);
    const auto d = SinrDistribution::form_a_iid(x, y, z);
    const ModulationParams m{rng.uniform(0.1, 1.0), rng.log_uniform(0.05, 2.0)};
    CHECK(rel_err(abep(d, m), abep_quadrature(d, m)) < 1e-6);
  }
}

TEST_CASE("abep: a stochastically better channel lowers the error rate") {
  const auto m = modulation_preset("dbpsk");
  const auto d1 = SinrDistribution::form_a_iid(2, 10.0, 1.0);
  const auto d2 = SinrDistribution::form_a_iid(2, 20.0, 1.0);
  CHECK(abep(d2, m) < abep(d1, m));
}

TEST_CASE("mean sinr: frozen independence-factorization value") {
  // FormA_iid{1,1,1}: E[A] E[1/(1+B)] = e Gamma(0,1) = 0.59634736232319407
  const auto d = SinrDistribution::form_a_iid(1, 1.0, 1.0);
  CHECK(rel_err(mean_sinr(d), 0.59634736232319407) < 1e-10);
  CHECK(rel_err(mean_sinr_quadrature(d), 0.59634736232319407) < 1e-8);
}

TEST_CASE("mean sinr: linear in the desired mean") {
  for (double y : {0.5, 3.0, 250.0}) {
    const auto d1 = SinrDistribution::form_a_iid(3, y, 2.0);
    const auto d2 = SinrDistribution::form_a_iid(3, 2.0 * y, 2.0);
    CHECK(rel_err(mean_sinr(d2), 2.0 * mean_sinr(d1)) < 1e-10);
  }
}

TEST_CASE("mean sinr: closed form tracks quadrature across a randomized i.i.d. suite") {
  oracle::Rng rng(31337);
  for (int i = 0; i < 25; ++i) {
    const int x = rng.uniform_int(1, 24);
    const double y = rng.log_uniform(0.1, 1e4);
    const double z = rng.log_uniform(0.1, 1e4);
    const auto d = SinrDistribution::form_a_iid(x, y, z);
    CHECK(rel_err(mean_sinr(d), mean_sinr_quadrature(d)) < 1e-6);
  }
}

TEST_CASE("ergodic capacity: frozen value and hop scaling") {
  // FormA_iid{2, 10, 1}, NH=1: frozen 1.8790796708489498 (quadrature oracle)
  const auto d = SinrDistribution::form_a_iid(2, 10.0, 1.0);
  const double c1 = ergodic_capacity(d, {1, 1e-10});
  CHECK(rel_err(c1, 1.8790796708489498) < 1e-9);
  const double simpson = oracle::integrate_semi_inf(
      [&](double g) { return std::log2(1.0 + g) * d.pdf(g); }, 10.0);
  CHECK(rel_err(c1, simpson) < 1e-9);
  // NH=2 halves the value exactly
  CHECK(ergodic_capacity(d, {2, 1e-10}) == c1 / 2.0);
}

TEST_CASE("ergodic capacity: concentrated limit approaches the Jensen bound") {
  const auto d = SinrDistribution::form_a_iid(1, 1e6, 1e-6);
  const double exact = ergodic_capacity(d, {1, 1e-10});
  const double bound = capacity_upper_bound(d, {1, 1e-10});
  CHECK(exact <= bound);
  CHECK(rel_err(exact, bound) < 0.05);
}

TEST_CASE("jensen bound dominates the exact capacity everywhere") {
  const SinrDistribution dists[] = {
      SinrDistribution::form_a_iid(4, 5.0, 1.0),
      SinrDistribution::form_a_ind(2.0, {0.4, 1.1, 2.9}),
      SinrDistribution::form_b_iid(2, 3, 8.0, 0.8, 2.2),
      hybrid_tot(),
  };
  for (const auto& d : dists) {
    for (int nh : {1, 2}) {
      const CapacityParams p{nh, 1e-10};
      const double exact = ergodic_capacity(d, p);
      const double bound = capacity_upper_bound(d, p);
      CHECK(bound >= exact);
      CHECK(rel_err(bound, std::log2(1.0 + mean_sinr(d)) / nh) < 1e-12);
    }
  }
}

TEST_CASE("outage probability: boundary values and monotonicity") {
  const auto d = hybrid_tot();
  CHECK(outage_probability(d, 0.0) == 0.0);
  CHECK(outage_probability(d, 1e12) == doctest::Approx(1.0).epsilon(1e-9));
  double prev = 0.0;
  for (double th = 0.0; th < 100.0; th += 2.5) {
    const double p = outage_probability(d, th);
    CHECK(p >= prev - 1e-15);
    prev = p;
  }
  CHECK_THROWS_AS(outage_probability(d, -1.0), std::domain_error);
}

TEST_CASE("metrics on composed end-to-end distributions stay consistent") {
  const auto d = hybrid_tot();
  // abep via the generic quadrature path matches an independent Simpson pass
  const auto m = modulation_preset("dbpsk");
  const double a = abep(d, m);
  const double simpson = 0.5 * oracle::integrate_semi_inf(
                                   [&](double g) { return std::exp(-g) * d.pdf(g); }, 1.0);
  CHECK(rel_err(a, simpson) < 1e-8);
  const double mu = mean_sinr(d);
  const double mu_simpson =
      oracle::integrate_semi_inf([&](double g) { return g * d.pdf(g); }, 60.0);
  CHECK(rel_err(mu, mu_simpson) < 1e-8);
}

TEST_CASE("modulation presets and validation") {
  const auto dbpsk = modulation_preset("dbpsk");
  CHECK(dbpsk.a == 0.5);
  CHECK(dbpsk.b == 1.0);
  const auto ncfsk = modulation_preset("ncfsk");
  CHECK(ncfsk.b == 0.5);
  CHECK_THROWS_AS(modulation_preset("qam4096"), std::invalid_argument);
  const auto d = SinrDistribution::form_a_iid(1, 1.0, 1.0);
  CHECK_THROWS_AS(abep(d, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(abep(d, {1.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(abep(d, {0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ergodic_capacity(d, {0, 1e-10}), std::invalid_argument);
}

TEST_SUITE_END();
