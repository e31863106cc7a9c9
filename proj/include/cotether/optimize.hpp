#ifndef COTETHER_OPTIMIZE_HPP
#define COTETHER_OPTIMIZE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cotether/scenario.hpp"
#include "cotether/sinr.hpp"

namespace cotether::opt {

enum class ObjectiveKind { total_sinr, maxmin_sinr };

// Objectives are evaluated on the mean-gain budget by default (deterministic,
// exactly reproducible); optionally averaged over seeded fading draws.
struct EvalMode {
  bool average_fading = false;
  int n_draws = 0;
  std::uint64_t seed = 0;
};

struct Objective {
  ObjectiveKind kind = ObjectiveKind::total_sinr;
  EvalMode mode;
};

struct TraceEntry {
  std::vector<sinr::ServingPoint> serving;  // candidate evaluated (may be a prefix)
  double value = 0.0;
};

struct OptResult {
  sinr::Assignment assignment;
  double objective_value = 0.0;
  std::uint64_t evaluations = 0;  // always equals trace.size()
  std::vector<TraceEntry> trace;
  // Objective value after each accepted step (index 0 = initialization).
  std::vector<double> incumbent_values;
  // Closed-form search-count bookkeeping associated with the method; can
  // differ from the executed count (see README).
  double formula_search_count = 0.0;
};

// Per-UE end-to-end SINRs of a full assignment under the evaluation mode.
std::vector<double> ue_sinrs(const net::LinkBudget& b, const sinr::Assignment& a,
                             const EvalMode& mode = {});

double evaluate_objective(const net::LinkBudget& b, const sinr::Assignment& a,
                          const Objective& obj);

// Enumerates every serving-point assignment: (M+1)^N options in a single
// cell, (E+M)^N in general. Throws CapExceededError (with the required
// count) when the space exceeds `cap`.
OptResult exhaustive_search(const net::LinkBudget& b, const Objective& obj,
                            std::uint64_t cap = 10000000);

struct GreedyOptions {
  bool shuffle_ue_order = false;  // default: index order, deterministic
  std::uint64_t shuffle_seed = 0;
};

// Multi-cell greedy: start from the nearest-eNB topology, then for each UE
// try every AP as a replacement serving point and adopt the best strict
// improvement. Exactly N*M candidate evaluations.
OptResult greedy_multi_cell(const net::LinkBudget& b, const EvalMode& mode = {},
                            const GreedyOptions& opts = {});

// Single-cell greedy: exhaustive over the first Q UEs, then each remaining
// UE picks the best of the M+1 serving points with earlier UEs frozen.
OptResult greedy_single_cell_total(const net::LinkBudget& b, int q,
                                   std::uint64_t cap = 10000000, const EvalMode& mode = {},
                                   const GreedyOptions& opts = {});
OptResult greedy_single_cell_maxmin(const net::LinkBudget& b, int q,
                                    std::uint64_t cap = 10000000, const EvalMode& mode = {},
                                    const GreedyOptions& opts = {});

// Conventional baseline: every UE direct, nearest eNB (the only option in a
// single cell).
sinr::Assignment conventional_baseline(const net::LinkBudget& b);

struct GainSpec {
  bool multi_cell = false;
  int n_min = 2, n_max = 7;
  int m_min = 1, m_max = 5;
  int q = 2;
  int replications = 200;
  std::uint64_t seed = 1;
  std::uint64_t cap = 10000000;
  bool include_exhaustive = false;
  ObjectiveKind objective = ObjectiveKind::total_sinr;
  double cell_radius = 500.0;
  double site_ring_radius = 1000.0;  // multi-cell only
  net::RadioParams radio;
};

struct GainRow {
  int n_ue = 0;
  int m_ap = 0;
  std::string scheme;  // "greedy" or "exhaustive"
  double gain_mean = 0.0, gain_ci_low = 0.0, gain_ci_high = 0.0;
  double mean_evaluations = 0.0;
};

// Hybrid-over-conventional objective gain, averaged over random scenarios
// per (N, M) point.
std::vector<GainRow> gain_curve(const GainSpec& spec);

}  // namespace cotether::opt

#endif  // COTETHER_OPTIMIZE_HPP
