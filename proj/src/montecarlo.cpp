#include "cotether/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cotether::mc {

namespace {

// splitmix64 finalizer
std::uint64_t fmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void parallel_for(std::uint64_t n, int workers, const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (workers <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const int w = std::min<std::uint64_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  const std::uint64_t chunk = (n + w - 1) / w;
  for (int t = 0; t < w; ++t) {
    const std::uint64_t lo = chunk * t;
    const std::uint64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

RngStream RngStream::at(std::uint64_t seed, std::uint64_t index) {
  return RngStream(fmix64(seed) ^ fmix64(index ^ 0x6A09E667F3BCC908ull));
}

std::uint64_t RngStream::next_u64() { return fmix64(key_ + 0x9E3779B97F4A7C15ull * ++ctr_); }

double RngStream::next_unit() {
  // (0, 1) strictly: 53-bit mantissa centered away from both endpoints.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::next_exp(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("next_exp: mean must be positive");
  return -mean * std::log(next_unit());
}

EmpiricalDist EmpiricalDist::from_sorted(std::vector<double> sorted, std::uint64_t seed) {
  EmpiricalDist e;
  e.n_ = sorted.size();
  e.seed_ = seed;
  e.samples_ = std::move(sorted);
  return e;
}

EmpiricalDist EmpiricalDist::from_bins(std::vector<std::uint64_t> counts, double hi,
                                       std::uint64_t n, std::uint64_t seed) {
  EmpiricalDist e;
  e.binned_ = true;
  e.counts_ = std::move(counts);
  e.hi_ = hi;
  e.n_ = n;
  e.seed_ = seed;
  return e;
}

const std::vector<double>& EmpiricalDist::samples() const {
  if (binned_) throw std::logic_error("EmpiricalDist: raw samples unavailable in binned mode");
  return samples_;
}

double EmpiricalDist::ecdf(double x) const {
  if (n_ == 0) throw std::logic_error("EmpiricalDist: empty");
  if (!binned_) {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(n_);
  }
  if (x < 0.0) return 0.0;
  const double w = hi_ / static_cast<double>(counts_.size());
  const auto edge = static_cast<std::size_t>(std::min<double>(x / w, counts_.size()));
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < edge; ++i) c += counts_[i];
  return static_cast<double>(c) / static_cast<double>(n_);
}

double EmpiricalDist::mean() const {
  if (n_ == 0) throw std::logic_error("EmpiricalDist: empty");
  double s = 0.0;
  if (!binned_) {
    for (double v : samples_) s += v;
    return s / static_cast<double>(n_);
  }
  const double w = hi_ / static_cast<double>(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i)
    s += static_cast<double>(counts_[i]) * (w * (i + 0.5));
  return s / static_cast<double>(n_);
}

double sample_link(const LinkModel& m, RngStream& rs) {
  const double a = rs.next_exp(m.y);
  double denom = 1.0;
  for (const auto& group : m.interferer_groups)
    for (double z : group) denom += rs.next_exp(z);
  return a / denom;
}

double sample_dist(const dist::SinrDistribution& d, RngStream& rs) {
  using namespace dist;
  const auto& v = d.variant();
  if (const auto* m = std::get_if<MinOf>(&v))
    return std::min(sample_dist(*m->left, rs), sample_dist(*m->right, rs));
  if (const auto* m = std::get_if<MaxOf>(&v))
    return std::max(sample_dist(*m->left, rs), sample_dist(*m->right, rs));
  LinkModel lm;
  if (const auto* a = std::get_if<FormAIid>(&v)) {
    lm.y = a->y;
    lm.interferer_groups.push_back(std::vector<double>(a->x, a->z));
  } else if (const auto* ai = std::get_if<FormAInd>(&v)) {
    lm.y = ai->y;
    lm.interferer_groups.push_back(ai->z);
  } else if (const auto* b = std::get_if<FormBIid>(&v)) {
    lm.y = b->y;
    lm.interferer_groups.push_back(std::vector<double>(b->x1, b->z1));
    lm.interferer_groups.push_back(std::vector<double>(b->x2, b->z2));
  } else {
    const auto* bi = std::get_if<FormBInd>(&v);
    lm.y = bi->y;
    lm.interferer_groups.push_back(bi->z1);
    lm.interferer_groups.push_back(bi->z2);
  }
  return sample_link(lm, rs);
}

namespace {

template <class Sampler>
EmpiricalDist simulate_impl(const McConfig& cfg, Sampler&& sample) {
  if (cfg.n_samples < 1) throw std::invalid_argument("simulate: need at least one sample");
  if (cfg.n_samples <= cfg.sort_threshold) {
    std::vector<double> samples(cfg.n_samples);
    parallel_for(cfg.n_samples, cfg.n_workers, [&](std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t i = lo; i < hi; ++i) {
        auto rs = RngStream::at(cfg.seed, i);
        samples[i] = sample(rs);
      }
    });
    std::sort(samples.begin(), samples.end());
    return EmpiricalDist::from_sorted(std::move(samples), cfg.seed);
  }
  // Binned mode: samples are regenerated per pass (streams are pure functions
  // of the index), so no intermediate storage is needed.
  double hi = 0.0;
  {
    std::vector<double> worker_max(std::max(cfg.n_workers, 1), 0.0);
    std::atomic<int> wid{0};
    parallel_for(cfg.n_samples, cfg.n_workers, [&](std::uint64_t lo, std::uint64_t hi_i) {
      const int id = wid++;
      double m = 0.0;
      for (std::uint64_t i = lo; i < hi_i; ++i) {
        auto rs = RngStream::at(cfg.seed, i);
        m = std::max(m, sample(rs));
      }
      worker_max[id] = m;
    });
    for (double m : worker_max) hi = std::max(hi, m);
  }
  const std::size_t n_bins = 100000;
  std::vector<std::uint64_t> counts(n_bins, 0);
  std::mutex merge_mutex;
  parallel_for(cfg.n_samples, cfg.n_workers, [&](std::uint64_t lo, std::uint64_t hi_i) {
    std::vector<std::uint64_t> local(n_bins, 0);
    for (std::uint64_t i = lo; i < hi_i; ++i) {
      auto rs = RngStream::at(cfg.seed, i);
      const double v = sample(rs);
      auto bin = static_cast<std::size_t>(v / hi * n_bins);
      if (bin >= n_bins) bin = n_bins - 1;
      ++local[bin];
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t i = 0; i < n_bins; ++i) counts[i] += local[i];
  });
  return EmpiricalDist::from_bins(std::move(counts), hi, cfg.n_samples, cfg.seed);
}

}  // namespace

EmpiricalDist simulate_link(const McConfig& cfg, const LinkModel& m) {
  if (!(m.y > 0.0)) throw std::invalid_argument("simulate_link: Y must be positive");
  for (const auto& g : m.interferer_groups)
    for (double z : g)
      if (!(z > 0.0)) throw std::invalid_argument("simulate_link: INR means must be positive");
  return simulate_impl(cfg, [&m](RngStream& rs) { return sample_link(m, rs); });
}

EmpiricalDist simulate_dist(const McConfig& cfg, const dist::SinrDistribution& d) {
  return simulate_impl(cfg, [&d](RngStream& rs) { return sample_dist(d, rs); });
}

double ks_distance(const EmpiricalDist& e, const dist::SinrDistribution& d) {
  if (e.size() == 0) throw std::logic_error("ks_distance: empty empirical distribution");
  const double n = static_cast<double>(e.size());
  double ks = 0.0;
  if (!e.binned()) {
    const auto& s = e.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = d.cdf(s[i]);
      ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
      ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return ks;
  }
  const double w = e.bin_upper() / static_cast<double>(e.bin_counts().size());
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < e.bin_counts().size(); ++i) {
    cum += e.bin_counts()[i];
    const double edge = w * static_cast<double>(i + 1);
    ks = std::max(ks, std::abs(d.cdf(edge) - static_cast<double>(cum) / n));
  }
  return ks;
}

MetricEstimates estimate_metrics(const EmpiricalDist& e, metrics::ModulationParams m,
                                 metrics::CapacityParams p, double gamma_th) {
  if (e.size() == 0) throw std::logic_error("estimate_metrics: empty empirical distribution");
  if (p.n_hops < 1) throw std::invalid_argument("estimate_metrics: NH must be >= 1");
  const double n = static_cast<double>(e.size());

  double s_exp = 0, s2_exp = 0, s_g = 0, s2_g = 0, s_cap = 0, s2_cap = 0, s_out = 0;
  auto accumulate = [&](double g, double weight) {
    const double ev = std::exp(-m.b * g);
    const double cv = std::log2(1.0 + g);
    s_exp += weight * ev;
    s2_exp += weight * ev * ev;
    s_g += weight * g;
    s2_g += weight * g * g;
    s_cap += weight * cv;
    s2_cap += weight * cv * cv;
    if (g < gamma_th) s_out += weight;
  };
  if (!e.binned()) {
    for (double g : e.samples()) accumulate(g, 1.0);
  } else {
    const double w = e.bin_upper() / static_cast<double>(e.bin_counts().size());
    for (std::size_t i = 0; i < e.bin_counts().size(); ++i)
      if (e.bin_counts()[i])
        accumulate(w * (static_cast<double>(i) + 0.5),
                   static_cast<double>(e.bin_counts()[i]));
  }

  auto mean_se = [n](double s, double s2) {
    const double mu = s / n;
    const double var = std::max(0.0, s2 / n - mu * mu);
    return std::pair<double, double>(mu, std::sqrt(var / n));
  };
  MetricEstimates out;
  auto [me, se_e] = mean_se(s_exp, s2_exp);
  out.abep = m.a * me;
  out.abep_se = m.a * se_e;
  auto [mg, se_g] = mean_se(s_g, s2_g);
  out.mean_sinr = mg;
  out.mean_sinr_se = se_g;
  auto [mcap, se_cap] = mean_se(s_cap, s2_cap);
  out.capacity = mcap / p.n_hops;
  out.capacity_se = se_cap / p.n_hops;
  const double pout = s_out / n;
  out.outage = pout;
  out.outage_se = std::sqrt(std::max(0.0, pout * (1.0 - pout)) / n);
  return out;
}

sinr::FadingDraw draw_fading(const net::LinkBudget& b, std::uint64_t seed,
                             std::uint64_t draw_index) {
  using Kind = net::NodeRef::Kind;
  sinr::FadingDraw d(b.n_enb(), b.n_ap(), b.n_ue());
  auto rs = RngStream::at(seed, draw_index);
  for (int e = 0; e < b.n_enb(); ++e) {
    for (int k = 0; k < b.n_ue(); ++k)
      d.slot({Kind::enb, e}, {Kind::ue, k}, net::Band::cellular) =
          rs.next_exp(b.enb_to_ue(e, k));
    for (int m = 0; m < b.n_ap(); ++m)
      d.slot({Kind::enb, e}, {Kind::ap, m}, net::Band::cellular) =
          rs.next_exp(b.enb_to_ap(e, m));
  }
  for (int m = 0; m < b.n_ap(); ++m)
    for (int k = 0; k < b.n_ue(); ++k)
      d.slot({Kind::ap, m}, {Kind::ue, k}, net::Band::wlan) = rs.next_exp(b.ap_to_ue(m, k));
  return d;
}

}  // namespace cotether::mc
