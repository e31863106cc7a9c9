#include "cotether/montecarlo.hpp"

#include <cmath>
#include <doctest.h>

#include "cotether/dist.hpp"
#include "cotether/metrics.hpp"
#include "cotether/sinr.hpp"
#include "support/oracle.hpp"

using namespace cotether::mc;
using cotether::dist::SinrDistribution;
using oracle::rel_err;

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("rng streams: deterministic and index-separated") {
  auto a = RngStream::at(1, 7);
  auto b = RngStream::at(1, 7);
  auto c = RngStream::at(1, 8);
  bool differs = false;
  for (int i = 0; i < 32; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    differs = differs || va != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("exponential sampling: mean and unit-interval bounds") {
  auto rs = RngStream::at(3, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rs.next_unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += rs.next_exp(2.5);
  }
  // SE of the mean is 2.5/sqrt(n)
  CHECK(std::abs(sum / n - 2.5) < 3.0 * 2.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("simulate_link: no interferers recovers the desired mean") {
  McConfig cfg;
  cfg.n_samples = 100000;
  cfg.seed = 11;
  const auto e = simulate_link(cfg, {7.0, {}});
  CHECK(std::abs(e.mean() - 7.0) < 3.0 * 7.0 / std::sqrt(1e5));
}

TEST_CASE("simulate determinism: same seed bit-identical, workers irrelevant") {
  const auto d = SinrDistribution::form_b_iid(2, 3, 4.0, 0.8, 2.2);
  McConfig cfg;
  cfg.n_samples = 50000;
  cfg.seed = 21;
  cfg.n_workers = 1;
  const auto e1 = simulate_dist(cfg, d);
  cfg.n_workers = 4;
  const auto e2 = simulate_dist(cfg, d);
  REQUIRE(e1.size() == e2.size());
  for (std::size_t i = 0; i < e1.samples().size(); i += 997)
    CHECK(e1.samples()[i] == e2.samples()[i]);
  CHECK(e1.samples().front() == e2.samples().front());
  CHECK(e1.samples().back() == e2.samples().back());
  // a different seed must actually change the data
  cfg.seed = 22;
  const auto e3 = simulate_dist(cfg, d);
  CHECK(e1.samples().front() != e3.samples().front());
}

TEST_CASE("empirical cdf hits the frozen form-A value") {
  // FormA_iid{1,1,1}: cdf(1) = 0.81606, binomial SE at 1e6 is ~4e-4
  const auto d = SinrDistribution::form_a_iid(1, 1.0, 1.0);
  McConfig cfg;
  cfg.n_samples = 1000000;
  cfg.seed = 5;
  cfg.n_workers = 4;
  const auto e = simulate_dist(cfg, d);
  CHECK(std::abs(e.ecdf(1.0) - 0.81606027941427884) < 0.002);
}

TEST_CASE("ks distance: self-sampling stays near the Glivenko-Cantelli rate") {
  const auto d = SinrDistribution::form_a_iid(2, 3.0, 1.0);
  McConfig cfg;
  cfg.n_samples = 100000;
  cfg.seed = 8;
  cfg.n_workers = 2;
  const auto e = simulate_dist(cfg, d);
  // typical KS fluctuation is ~1/sqrt(n) = 0.0032; allow twice 1.36/sqrt(n)
  CHECK(ks_distance(e, d) < 2.0 * 1.36 / std::sqrt(1e5));
  // a mismatched model (Y off by 2x) is far outside that band; regression
  // threshold frozen from a calibration run: observed distance ~0.17
  const auto wrong = SinrDistribution::form_a_iid(2, 6.0, 1.0);
  CHECK(ks_distance(e, wrong) > 0.1);
}

TEST_CASE("ks distance: single sample is bounded by one") {
  const auto d = SinrDistribution::form_a_iid(1, 1.0, 1.0);
  McConfig cfg;
  cfg.n_samples = 1;
  cfg.seed = 3;
  const auto e = simulate_dist(cfg, d);
  const double ks = ks_distance(e, d);
  CHECK(ks >= 0.0);
  CHECK(ks <= 1.0);
}

TEST_CASE("ks distance: closed forms match their samplers across variants") {
  McConfig cfg;
  cfg.n_samples = 1000000;
  cfg.n_workers = 4;
  cfg.seed = 71;
  const SinrDistribution dists[] = {
      SinrDistribution::form_a_iid(4, 10.0, 2.0),
      SinrDistribution::form_a_ind(5.0, {0.7, 2.0, 6.5}),
      SinrDistribution::form_b_iid(2, 3, 20.0, 0.8, 2.2),
      SinrDistribution::form_b_ind(8.0, {0.3, 1.0}, {2.1, 5.0}),
      SinrDistribution::min_of(SinrDistribution::form_b_iid(2, 2, 50.0, 1.0, 3.0),
                               SinrDistribution::form_a_iid(2, 40.0, 2.0)),
      cotether::dist::end_to_end_distribution(
          SinrDistribution::form_b_iid(2, 2, 50.0, 1.0, 3.0),
          SinrDistribution::form_a_iid(2, 40.0, 2.0),
          SinrDistribution::form_b_iid(1, 2, 60.0, 0.5, 4.0)),
  };
  for (const auto& d : dists) {
    const auto e = simulate_dist(cfg, d);
    CHECK(ks_distance(e, d) <= 0.005);
    ++cfg.seed;
  }
}

TEST_CASE("estimate_metrics: constant-sample sanity") {
  const auto e = EmpiricalDist::from_sorted({3.0, 3.0, 3.0, 3.0}, 0);
  const auto r = estimate_metrics(e, {0.5, 1.0}, {1, 1e-10}, 2.0);
  CHECK(r.mean_sinr == 3.0);
  CHECK(r.mean_sinr_se == 0.0);
  CHECK(r.outage == 0.0);
  const auto r2 = estimate_metrics(e, {0.5, 1.0}, {1, 1e-10}, 4.0);
  CHECK(r2.outage == 1.0);
  // capacity of constant gamma = 1 is exactly one bit
  const auto e1 = EmpiricalDist::from_sorted({1.0, 1.0}, 0);
  CHECK(estimate_metrics(e1, {0.5, 1.0}, {1, 1e-10}, 0.5).capacity ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("estimate_metrics: agrees with the analytic metrics within 3 sigma") {
  const auto d = SinrDistribution::form_a_iid(2, 10.0, 1.0);
  McConfig cfg;
  cfg.n_samples = 1000000;
  cfg.seed = 12;
  cfg.n_workers = 4;
  const auto e = simulate_dist(cfg, d);
  const auto m = cotether::metrics::modulation_preset("dbpsk");
  const cotether::metrics::CapacityParams p{1, 1e-10};
  const double th = 2.0;
  const auto r = estimate_metrics(e, m, p, th);
  CHECK(std::abs(r.abep - cotether::metrics::abep(d, m)) < 3.0 * r.abep_se);
  CHECK(std::abs(r.mean_sinr - cotether::metrics::mean_sinr(d)) < 3.0 * r.mean_sinr_se);
  CHECK(std::abs(r.capacity - cotether::metrics::ergodic_capacity(d, p)) <
        3.0 * r.capacity_se);
  CHECK(std::abs(r.outage - cotether::metrics::outage_probability(d, th)) <
        3.0 * r.outage_se);
}

TEST_CASE("standard errors shrink like one over root n") {
  const auto d = SinrDistribution::form_a_iid(2, 10.0, 1.0);
  McConfig cfg;
  cfg.seed = 9;
  cfg.n_workers = 2;
  cfg.n_samples = 100000;
  const auto r1 = estimate_metrics(simulate_dist(cfg, d), {0.5, 1.0}, {1, 1e-10}, 1.0);
  cfg.n_samples = 400000;
  const auto r2 = estimate_metrics(simulate_dist(cfg, d), {0.5, 1.0}, {1, 1e-10}, 1.0);
  // quadrupling n halves the SE, up to sampling noise in the SE estimate
  CHECK(r2.mean_sinr_se / r1.mean_sinr_se > 0.42);
  CHECK(r2.mean_sinr_se / r1.mean_sinr_se < 0.58);
}

TEST_CASE("binned mode approximates the sorted mode") {
  const auto d = SinrDistribution::form_a_iid(2, 5.0, 1.0);
  McConfig cfg;
  cfg.n_samples = 200000;
  cfg.seed = 14;
  cfg.n_workers = 3;
  const auto sorted = simulate_dist(cfg, d);
  cfg.sort_threshold = 1000;  // force the binned path
  const auto binned = simulate_dist(cfg, d);
  CHECK(binned.binned());
  CHECK(!sorted.binned());
  CHECK(rel_err(binned.mean(), sorted.mean()) < 1e-3);
  CHECK(std::abs(ks_distance(binned, d) - ks_distance(sorted, d)) < 1e-3);
  for (double g : {0.5, 2.0, 8.0})
    CHECK(std::abs(binned.ecdf(g) - sorted.ecdf(g)) < 1e-3);
}

TEST_CASE("link selection: sampled max matches the cdf product") {
  // max(direct, relayed) over independent branches has cdf F_d * F_r
  const auto direct = SinrDistribution::form_a_iid(3, 8.0, 1.5);
  const auto relayed = SinrDistribution::min_of(SinrDistribution::form_a_iid(2, 12.0, 1.0),
                                                SinrDistribution::form_a_iid(2, 9.0, 2.0));
  const auto selected = SinrDistribution::max_of(direct, relayed);
  McConfig cfg;
  cfg.n_samples = 400000;
  cfg.seed = 33;
  cfg.n_workers = 4;
  std::vector<double> samples;
  samples.reserve(cfg.n_samples);
  for (std::uint64_t i = 0; i < cfg.n_samples; ++i) {
    auto rs = RngStream::at(cfg.seed, i);
    const double d = sample_dist(direct, rs);
    const double r = sample_dist(relayed, rs);
    samples.push_back(cotether::sinr::sinr_selection(d, r));
  }
  std::sort(samples.begin(), samples.end());
  const auto e = EmpiricalDist::from_sorted(std::move(samples), cfg.seed);
  CHECK(ks_distance(e, selected) < 0.005);
}

TEST_CASE("draw_fading: gains average to the budget means") {
  const auto b = cotether::net::LinkBudget::from_matrices(1, 1, 2, {10.0, 20.0}, {30.0},
                                                          {5.0, 8.0});
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto draw = draw_fading(b, 77, i);
    sum += draw.gain({cotether::net::NodeRef::Kind::enb, 0},
                     {cotether::net::NodeRef::Kind::ue, 1}, cotether::net::Band::cellular);
  }
  CHECK(std::abs(sum / n - 20.0) < 3.0 * 20.0 / std::sqrt(static_cast<double>(n)));
}

TEST_SUITE_END();
