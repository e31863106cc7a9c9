#ifndef COTETHER_MONTECARLO_HPP
#define COTETHER_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "cotether/dist.hpp"
#include "cotether/metrics.hpp"
#include "cotether/scenario.hpp"
#include "cotether/sinr.hpp"

namespace cotether::mc {

// Counter-based stream: the n-th variate of stream (seed, index) is a pure
// function of (seed, index, n), so parallel partitioning over indices cannot
// change any result.
class RngStream {
 public:
  static RngStream at(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double next_unit();              // strictly inside (0, 1)
  double next_exp(double mean);    // inverse transform, -mean*log(U)

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

struct McConfig {
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 1;
  int n_workers = 1;
  int topology_replications = 1;
  std::uint64_t sort_threshold = 10000000;  // binned storage above this
};

// Empirical distribution of simulated SINR samples: sorted samples below the
// threshold, fixed-width bins above it.
class EmpiricalDist {
 public:
  static EmpiricalDist from_sorted(std::vector<double> sorted, std::uint64_t seed);
  static EmpiricalDist from_bins(std::vector<std::uint64_t> counts, double hi,
                                 std::uint64_t n, std::uint64_t seed);

  bool binned() const { return binned_; }
  std::uint64_t size() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& samples() const;  // throws if binned
  double bin_upper() const { return hi_; }
  const std::vector<std::uint64_t>& bin_counts() const { return counts_; }

  double ecdf(double x) const;
  double mean() const;

 private:
  bool binned_ = false;
  std::uint64_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> samples_;
  std::vector<std::uint64_t> counts_;
  double hi_ = 0.0;
};

// One ratio link gamma = A / (1 + sum of independent exponentials); an empty
// group list gives the pure desired-SNR link.
struct LinkModel {
  double y = 1.0;
  std::vector<std::vector<double>> interferer_groups;
};

// Samples the defining ratio of the model/distribution; independent of the
// closed-form pdf/cdf path by construction.
double sample_link(const LinkModel& m, RngStream& rs);
double sample_dist(const dist::SinrDistribution& d, RngStream& rs);

EmpiricalDist simulate_link(const McConfig& cfg, const LinkModel& m);
EmpiricalDist simulate_dist(const McConfig& cfg, const dist::SinrDistribution& d);

// Kolmogorov-Smirnov sup-distance between the empirical cdf and the analytic
// one, evaluated over the sample points (bin edges when binned).
double ks_distance(const EmpiricalDist& e, const dist::SinrDistribution& d);

struct MetricEstimates {
  double abep = 0.0, abep_se = 0.0;
  double mean_sinr = 0.0, mean_sinr_se = 0.0;
  double capacity = 0.0, capacity_se = 0.0;
  double outage = 0.0, outage_se = 0.0;
};

// Plug-in sample-average estimators of the four metrics with their standard
// errors. Binned inputs are estimated from bin midpoints.
MetricEstimates estimate_metrics(const EmpiricalDist& e, metrics::ModulationParams m,
                                 metrics::CapacityParams p, double gamma_th);

// One fading realization for every budget entry: independent exponentials
// with the budget means, addressed like the budget.
sinr::FadingDraw draw_fading(const net::LinkBudget& b, std::uint64_t seed,
                             std::uint64_t draw_index);

}  // namespace cotether::mc

#endif  // COTETHER_MONTECARLO_HPP
