#include "cotether/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cotether/errors.hpp"
#include "cotether/montecarlo.hpp"

namespace cotether::opt {

namespace {

using sinr::Assignment;
using sinr::ServingPoint;
using sinr::Topology;

double evaluate_assignment(const net::LinkBudget& b, const Assignment& a, ObjectiveKind kind,
                           const EvalMode& mode) {
  const Topology topo(b, a);
  auto objective_of_draw = [&](const sinr::FadingDraw& d) {
    if (kind == ObjectiveKind::total_sinr) return sinr::overall_sinr(d, topo);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < b.n_ue(); ++k)
      worst = std::min(worst, sinr::sinr_end_to_end(d, topo, k));
    return worst;
  };
  if (!mode.average_fading) return objective_of_draw(sinr::FadingDraw::mean_draw(b));
  if (mode.n_draws < 1) throw std::invalid_argument("EvalMode: n_draws must be >= 1");
  double s = 0.0;
  for (int i = 0; i < mode.n_draws; ++i)
    s += objective_of_draw(mc::draw_fading(b, mode.seed, static_cast<std::uint64_t>(i)));
  return s / mode.n_draws;
}

std::uint64_t checked_pow_count(std::uint64_t base, int exp, std::uint64_t cap,
                                const char* what) {
  const double est = std::pow(static_cast<double>(base), exp);
  if (est > static_cast<double>(cap))
    throw CapExceededError(std::string(what) + ": requires " +
                               std::to_string(static_cast<unsigned long long>(est)) +
                               " evaluations, above cap " + std::to_string(cap),
                           static_cast<unsigned long long>(est));
  std::uint64_t n = 1;
  for (int i = 0; i < exp; ++i) n *= base;
  return n;
}

std::vector<ServingPoint> serving_point_list(const net::LinkBudget& b) {
  std::vector<ServingPoint> pts;
  for (int e = 0; e < b.n_enb(); ++e) pts.push_back(ServingPoint::enb(e));
  for (int m = 0; m < b.n_ap(); ++m) pts.push_back(ServingPoint::ap(m));
  return pts;
}

std::vector<int> ue_order(int n_ue, const GreedyOptions& opts) {
  std::vector<int> order(n_ue);
  std::iota(order.begin(), order.end(), 0);
  if (opts.shuffle_ue_order) {
    auto rs = mc::RngStream::at(opts.shuffle_seed, 0x75e5);
    for (int i = n_ue - 1; i > 0; --i) {
      const int j = static_cast<int>(rs.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(order[i], order[j]);
    }
  }
  return order;
}

// Scatters a processing-order serving vector back to UE-index space.
std::vector<ServingPoint> scatter(const std::vector<int>& order,
                                  const std::vector<ServingPoint>& chosen, int n) {
  std::vector<ServingPoint> serving(n);
  for (std::size_t i = 0; i < chosen.size(); ++i) serving[order[i]] = chosen[i];
  return serving;
}

OptResult greedy_single_cell(const net::LinkBudget& b, ObjectiveKind kind, int q,
                             std::uint64_t cap, const EvalMode& mode, const GreedyOptions& opts) {
  const int n = b.n_ue();
  const int m = b.n_ap();
  if (b.n_enb() != 1)
    throw std::invalid_argument("greedy_single_cell: budget must have exactly one eNB");
  if (n == 0) throw std::invalid_argument("greedy_single_cell: no UEs");
  if (q < 1 || q > n) throw std::invalid_argument("greedy_single_cell: Q must be in [1, N]");
  const auto pts = serving_point_list(b);  // the eNB, then APs in index order
  const std::uint64_t stage1 = checked_pow_count(pts.size(), q, cap, "greedy_single_cell");

  OptResult res;
  const auto order = ue_order(n, opts);

  // Stage 1: exhaustive over the first Q processed UEs; the rest are not yet
  // connected and do not transmit.
  const auto q_budget = b.subset_ues(std::vector<int>(order.begin(), order.begin() + q));
  std::vector<std::size_t> odo(q, 0);
  std::vector<ServingPoint> cur(q, pts[0]);
  std::vector<ServingPoint> chosen;  // best prefix, processing order
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t it = 0; it < stage1; ++it) {
    for (int k = 0; k < q; ++k) cur[k] = pts[odo[k]];
    const double v = evaluate_assignment(q_budget, Assignment{cur}, kind, mode);
    res.trace.push_back({cur, v});
    if (v > best) {
      best = v;
      chosen = cur;
    }
    for (int k = q - 1; k >= 0; --k) {
      if (++odo[k] < pts.size()) break;
      odo[k] = 0;
    }
  }
  res.incumbent_values.push_back(best);

  // Stage 2: one UE at a time; all M+1 serving points examined with the
  // earlier connections frozen, the maximizer adopted (lowest id on ties).
  for (int jpos = q; jpos < n; ++jpos) {
    const auto sub_budget =
        b.subset_ues(std::vector<int>(order.begin(), order.begin() + jpos + 1));
    ServingPoint best_sp = pts[0];
    double best_v = -std::numeric_limits<double>::infinity();
    for (const auto& sp : pts) {
      auto cand = chosen;
      cand.push_back(sp);
      const double v = evaluate_assignment(sub_budget, Assignment{cand}, kind, mode);
      res.trace.push_back({cand, v});
      if (v > best_v) {
        best_v = v;
        best_sp = sp;
      }
    }
    chosen.push_back(best_sp);
    res.incumbent_values.push_back(best_v);
  }

  res.assignment.serving = scatter(order, chosen, n);
  res.objective_value = evaluate_assignment(b, res.assignment, kind, mode);
  res.evaluations = res.trace.size();
  // Documented bookkeeping formula G = (M+1)^Q + (N-Q)*M; the executed
  // stage-2 loop visits M+1 candidates per UE, so the run count is larger.
  res.formula_search_count =
      std::pow(static_cast<double>(m + 1), q) + static_cast<double>(n - q) * m;
  return res;
}

}  // namespace

std::vector<double> ue_sinrs(const net::LinkBudget& b, const Assignment& a,
                             const EvalMode& mode) {
  const Topology topo(b, a);
  std::vector<double> out(b.n_ue(), 0.0);
  if (!mode.average_fading) {
    const auto d = sinr::FadingDraw::mean_draw(b);
    for (int k = 0; k < b.n_ue(); ++k) out[k] = sinr::sinr_end_to_end(d, topo, k);
    return out;
  }
  if (mode.n_draws < 1) throw std::invalid_argument("EvalMode: n_draws must be >= 1");
  for (int i = 0; i < mode.n_draws; ++i) {
    const auto d = mc::draw_fading(b, mode.seed, static_cast<std::uint64_t>(i));
    for (int k = 0; k < b.n_ue(); ++k) out[k] += sinr::sinr_end_to_end(d, topo, k);
  }
  for (double& v : out) v /= mode.n_draws;
  return out;
}

double evaluate_objective(const net::LinkBudget& b, const Assignment& a, const Objective& obj) {
  return evaluate_assignment(b, a, obj.kind, obj.mode);
}

OptResult exhaustive_search(const net::LinkBudget& b, const Objective& obj, std::uint64_t cap) {
  const int n = b.n_ue();
  if (n == 0) throw std::invalid_argument("exhaustive_search: no UEs");
  const auto pts = serving_point_list(b);
  const std::uint64_t total = checked_pow_count(pts.size(), n, cap, "exhaustive_search");

  OptResult res;
  res.formula_search_count = static_cast<double>(total);
  std::vector<std::size_t> odo(n, 0);
  std::vector<ServingPoint> cur(n, pts[0]);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t it = 0; it < total; ++it) {
    for (int k = 0; k < n; ++k) cur[k] = pts[odo[k]];
    const double v = evaluate_assignment(b, Assignment{cur}, obj.kind, obj.mode);
    res.trace.push_back({cur, v});
    if (v > best) {
      best = v;
      res.assignment.serving = cur;
      res.incumbent_values.push_back(v);
    }
    for (int k = n - 1; k >= 0; --k) {  // odometer, last UE fastest
      if (++odo[k] < pts.size()) break;
      odo[k] = 0;
    }
  }
  res.objective_value = best;
  res.evaluations = res.trace.size();
  return res;
}

OptResult greedy_multi_cell(const net::LinkBudget& b, const EvalMode& mode,
                            const GreedyOptions& opts) {
  const int n = b.n_ue();
  const int m = b.n_ap();
  if (n == 0) throw std::invalid_argument("greedy_multi_cell: no UEs");
  OptResult res;
  res.assignment = Assignment::all_nearest_enb(b);
  double current = evaluate_assignment(b, res.assignment, ObjectiveKind::total_sinr, mode);
  res.incumbent_values.push_back(current);

  for (int j : ue_order(n, opts)) {
    const ServingPoint original = res.assignment.serving[j];
    ServingPoint best_sp = original;
    double best_v = current;
    for (int a = 0; a < m; ++a) {
      auto cand = res.assignment.serving;
      cand[j] = ServingPoint::ap(a);
      const double v = evaluate_assignment(b, Assignment{cand}, ObjectiveKind::total_sinr, mode);
      res.trace.push_back({cand, v});
      if (v > best_v) {  // strict improvement only
        best_v = v;
        best_sp = ServingPoint::ap(a);
      }
    }
    if (!(best_sp == original)) {
      res.assignment.serving[j] = best_sp;
      current = best_v;
      res.incumbent_values.push_back(current);
    }
  }
  res.objective_value = current;
  res.evaluations = res.trace.size();
  res.formula_search_count = static_cast<double>(n) * m;
  return res;
}

OptResult greedy_single_cell_total(const net::LinkBudget& b, int q, std::uint64_t cap,
                                   const EvalMode& mode, const GreedyOptions& opts) {
  return greedy_single_cell(b, ObjectiveKind::total_sinr, q, cap, mode, opts);
}

OptResult greedy_single_cell_maxmin(const net::LinkBudget& b, int q, std::uint64_t cap,
                                    const EvalMode& mode, const GreedyOptions& opts) {
  return greedy_single_cell(b, ObjectiveKind::maxmin_sinr, q, cap, mode, opts);
}

sinr::Assignment conventional_baseline(const net::LinkBudget& b) {
  return Assignment::all_nearest_enb(b);
}

std::vector<GainRow> gain_curve(const GainSpec& spec) {
  if (spec.replications < 1) throw std::invalid_argument("gain_curve: replications must be >= 1");
  if (spec.n_min < 1 || spec.n_min > spec.n_max || spec.m_min < 0 || spec.m_min > spec.m_max)
    throw std::invalid_argument("gain_curve: bad N/M ranges");
  std::vector<GainRow> rows;
  const Objective obj{spec.objective, {}};
  for (int n = spec.n_min; n <= spec.n_max; ++n) {
    for (int m = spec.m_min; m <= spec.m_max; ++m) {
      std::vector<double> greedy_gains, exhaustive_gains;
      double greedy_evals = 0.0, exhaustive_evals = 0.0;
      for (int rep = 0; rep < spec.replications; ++rep) {
        const std::uint64_t s =
            spec.seed ^ (0x9E3779B97F4A7C15ull *
                         static_cast<std::uint64_t>((n * 1315423911u) ^ (m * 2654435761u) ^
                                                    static_cast<unsigned>(rep)));
        const auto scen =
            spec.multi_cell
                ? net::generate_multi_cell(n, n, m, spec.cell_radius, spec.site_ring_radius, s,
                                           spec.radio)
                : net::generate_uniform(n, m, spec.cell_radius, s, spec.radio);
        const auto budget = net::build_link_budget(scen);
        const double base = evaluate_objective(budget, conventional_baseline(budget), obj);
        const auto greedy = spec.multi_cell
                                ? greedy_multi_cell(budget, obj.mode)
                                : greedy_single_cell(budget, spec.objective, std::min(spec.q, n),
                                                     spec.cap, obj.mode, {});
        greedy_gains.push_back(greedy.objective_value / base);
        greedy_evals += static_cast<double>(greedy.evaluations);
        if (spec.include_exhaustive) {
          const auto ex = exhaustive_search(budget, obj, spec.cap);
          exhaustive_gains.push_back(ex.objective_value / base);
          exhaustive_evals += static_cast<double>(ex.evaluations);
        }
      }
      auto summarize = [&](const std::vector<double>& gains, double evals, const char* scheme) {
        GainRow row;
        row.n_ue = n;
        row.m_ap = m;
        row.scheme = scheme;
        double s = 0.0, s2 = 0.0;
        for (double g : gains) {
          s += g;
          s2 += g * g;
        }
        const double mean = s / gains.size();
        const double var = std::max(0.0, s2 / gains.size() - mean * mean);
        const double se = std::sqrt(var / gains.size());
        row.gain_mean = mean;
        row.gain_ci_low = mean - 1.96 * se;
        row.gain_ci_high = mean + 1.96 * se;
        row.mean_evaluations = evals / gains.size();
        return row;
      };
      rows.push_back(summarize(greedy_gains, greedy_evals, "greedy"));
      if (spec.include_exhaustive)
        rows.push_back(summarize(exhaustive_gains, exhaustive_evals, "exhaustive"));
    }
  }
  return rows;
}

}  // namespace cotether::opt
