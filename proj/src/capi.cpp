#include "cotether.h"

#include <cstring>
#include <new>
#include <string>

#include "cotether/dist.hpp"
#include "cotether/errors.hpp"
#include "cotether/metrics.hpp"
#include "cotether/montecarlo.hpp"
#include "cotether/optimize.hpp"
#include "cotether/scenario.hpp"
#include "cotether/sinr.hpp"
#include "cotether/specfun.hpp"

using cotether::CapExceededError;
using cotether::ConvergenceError;
using cotether::IllConditionedError;

struct ct_dist {
  cotether::dist::SinrDistribution d;
};
struct ct_samples {
  cotether::mc::EmpiricalDist e;
};
struct ct_scenario {
  cotether::net::Scenario s;
};
struct ct_budget {
  cotether::net::LinkBudget b;
};
struct ct_linkconf {
  cotether::net::AbstractBudget ab;
};
struct ct_opt_result {
  cotether::opt::OptResult r;
  int n_enb;
  int n_ue;
};

namespace {

thread_local std::string g_last_error;

ct_status fail(ct_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <class F>
ct_status guarded(F&& f) {
  try {
    f();
    return CT_OK;
  } catch (const IllConditionedError& e) {
    return fail(CT_ERR_ILL_CONDITIONED, e.what());
  } catch (const CapExceededError& e) {
    return fail(CT_ERR_CAP_EXCEEDED, e.what());
  } catch (const ConvergenceError& e) {
    return fail(CT_ERR_NO_CONVERGENCE, e.what());
  } catch (const std::domain_error& e) {
    return fail(CT_ERR_DOMAIN, e.what());
  } catch (const std::overflow_error& e) {
    return fail(CT_ERR_OVERFLOW, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CT_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CT_ERR_INTERNAL, e.what());
  }
}

ct_status require(bool ok, const char* what) {
  return ok ? CT_OK : fail(CT_ERR_INVALID, what);
}

cotether::net::RadioParams to_radio(const ct_radio_params* p) {
  if (!p) return {};
  return {p->p_enb, p->p_ap, p->f_cell, p->f_wlan, p->noise_power};
}

// 1-based serving-point id <-> ServingPoint
int to_display(const cotether::sinr::ServingPoint& sp, int n_enb) {
  return sp.kind == cotether::sinr::ServingPoint::Kind::enb ? sp.index + 1
                                                            : n_enb + sp.index + 1;
}

cotether::sinr::Assignment from_display(const int* serving, int n_ue, int n_enb, int n_ap) {
  cotether::sinr::Assignment a;
  for (int k = 0; k < n_ue; ++k) {
    const int id = serving[k];
    if (id < 1 || id > n_enb + n_ap)
      throw std::invalid_argument("serving id " + std::to_string(id) + " out of range");
    a.serving.push_back(id <= n_enb ? cotether::sinr::ServingPoint::enb(id - 1)
                                    : cotether::sinr::ServingPoint::ap(id - n_enb - 1));
  }
  return a;
}

cotether::opt::Objective to_objective(ct_objective obj) {
  cotether::opt::Objective o;
  o.kind = obj == CT_OBJ_TOTAL ? cotether::opt::ObjectiveKind::total_sinr
                               : cotether::opt::ObjectiveKind::maxmin_sinr;
  return o;
}

const cotether::net::LinkSegment* find_segment(const cotether::net::AbstractBudget& ab,
                                               const char* segment) {
  const std::string s = segment ? segment : "";
  if (s == "conv") return ab.conv ? &*ab.conv : nullptr;
  if (s == "eu") return ab.eu ? &*ab.eu : nullptr;
  if (s == "ea") return ab.ea ? &*ab.ea : nullptr;
  if (s == "au") return ab.au ? &*ab.au : nullptr;
  throw std::invalid_argument("unknown segment '" + s + "'");
}

cotether::dist::SinrDistribution segment_dist(const cotether::net::AbstractBudget& ab,
                                              const std::string& s) {
  using cotether::dist::LinkKind;
  const cotether::net::LinkSegment* seg = find_segment(ab, s.c_str());
  if (!seg) throw std::invalid_argument("segment '" + s + "' not present in budget");
  LinkKind kind;
  if (s == "conv") kind = LinkKind::conventional;
  else if (s == "eu") kind = LinkKind::hybrid_direct;
  else if (s == "ea") kind = LinkKind::ap_phase1;
  else kind = LinkKind::ue_phase2;
  return cotether::dist::from_interference_config(kind, seg->y, seg->z_primary,
                                                  seg->z_secondary);
}

}  // namespace

extern "C" {

const char* ct_version(void) { return CT_VERSION; }

const char* ct_last_error(void) { return g_last_error.c_str(); }

ct_status ct_upper_incomplete_gamma(double a, double x, double* out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] { *out = cotether::specfun::upper_incomplete_gamma(a, x); });
}

ct_status ct_tricomi_u(double a, double b, double z, double* out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] { *out = cotether::specfun::tricomi_u(a, b, z); });
}

ct_status ct_dist_form_a_iid(int x, double y, double z, ct_dist** out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded(
      [&] { *out = new ct_dist{cotether::dist::SinrDistribution::form_a_iid(x, y, z)}; });
}

ct_status ct_dist_form_a_ind(double y, const double* z, size_t n, ct_dist** out) {
  if (auto rc = require(out && (z || n == 0), "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_dist{
        cotether::dist::SinrDistribution::form_a_ind(y, std::vector<double>(z, z + n))};
  });
}

ct_status ct_dist_form_b_iid(int x1, int x2, double y, double z1, double z2, ct_dist** out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] {
    *out = new ct_dist{cotether::dist::SinrDistribution::form_b_iid(x1, x2, y, z1, z2)};
  });
}

ct_status ct_dist_form_b_ind(double y, const double* z1, size_t n1, const double* z2, size_t n2,
                             ct_dist** out) {
  if (auto rc = require(out && (z1 || n1 == 0) && (z2 || n2 == 0), "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_dist{cotether::dist::SinrDistribution::form_b_ind(
        y, std::vector<double>(z1, z1 + n1), std::vector<double>(z2, z2 + n2))};
  });
}

ct_status ct_dist_min(const ct_dist* left, const ct_dist* right, ct_dist** out) {
  if (auto rc = require(left && right && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_dist{cotether::dist::SinrDistribution::min_of(left->d, right->d)};
  });
}

ct_status ct_dist_max(const ct_dist* left, const ct_dist* right, ct_dist** out) {
  if (auto rc = require(left && right && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_dist{cotether::dist::SinrDistribution::max_of(left->d, right->d)};
  });
}

ct_status ct_dist_end_to_end(const ct_dist* ea, const ct_dist* au, const ct_dist* eu,
                             ct_dist** out) {
  if (auto rc = require(ea && au && eu && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_dist{cotether::dist::end_to_end_distribution(ea->d, au->d, eu->d)};
  });
}

void ct_dist_free(ct_dist* d) { delete d; }

ct_status ct_dist_pdf(const ct_dist* d, double gamma, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] { *out = d->d.pdf(gamma); });
}

ct_status ct_dist_cdf(const ct_dist* d, double gamma, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] { *out = d->d.cdf(gamma); });
}

ct_status ct_dist_describe(const ct_dist* d, char* buf, size_t buflen) {
  if (auto rc = require(d && buf && buflen > 0, "bad arguments")) return rc;
  return guarded([&] {
    const std::string s = d->d.describe();
    std::strncpy(buf, s.c_str(), buflen - 1);
    buf[buflen - 1] = '\0';
  });
}

ct_status ct_abep(const ct_dist* d, double mod_a, double mod_b, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] { *out = cotether::metrics::abep(d->d, {mod_a, mod_b}); });
}

ct_status ct_mean_sinr(const ct_dist* d, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] { *out = cotether::metrics::mean_sinr(d->d); });
}

ct_status ct_ergodic_capacity(const ct_dist* d, int n_hops, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = cotether::metrics::ergodic_capacity(d->d, {n_hops, 1e-10});
  });
}

ct_status ct_capacity_upper_bound(const ct_dist* d, int n_hops, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = cotether::metrics::capacity_upper_bound(d->d, {n_hops, 1e-10});
  });
}

ct_status ct_outage_probability(const ct_dist* d, double gamma_th, double* out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] { *out = cotether::metrics::outage_probability(d->d, gamma_th); });
}

ct_status ct_modulation_preset(const char* name, double* mod_a, double* mod_b) {
  if (auto rc = require(name && mod_a && mod_b, "bad arguments")) return rc;
  return guarded([&] {
    const auto m = cotether::metrics::modulation_preset(name);
    *mod_a = m.a;
    *mod_b = m.b;
  });
}

ct_status ct_simulate(const ct_dist* d, uint64_t n, uint64_t seed, int n_workers,
                      ct_samples** out) {
  if (auto rc = require(d && out, "bad arguments")) return rc;
  return guarded([&] {
    cotether::mc::McConfig cfg;
    cfg.n_samples = n;
    cfg.seed = seed;
    cfg.n_workers = n_workers;
    *out = new ct_samples{cotether::mc::simulate_dist(cfg, d->d)};
  });
}

uint64_t ct_samples_count(const ct_samples* s) { return s ? s->e.size() : 0; }

ct_status ct_samples_get(const ct_samples* s, uint64_t i, double* out) {
  if (auto rc = require(s && out, "bad arguments")) return rc;
  return guarded([&] {
    const auto& v = s->e.samples();
    if (i >= v.size()) throw std::invalid_argument("sample index out of range");
    *out = v[i];
  });
}

ct_status ct_samples_mean(const ct_samples* s, double* out) {
  if (auto rc = require(s && out, "bad arguments")) return rc;
  return guarded([&] { *out = s->e.mean(); });
}

ct_status ct_ks_distance(const ct_samples* s, const ct_dist* d, double* out) {
  if (auto rc = require(s && d && out, "bad arguments")) return rc;
  return guarded([&] { *out = cotether::mc::ks_distance(s->e, d->d); });
}

ct_status ct_estimate_metrics(const ct_samples* s, double mod_a, double mod_b, int n_hops,
                              double gamma_th, double est[4], double se[4]) {
  if (auto rc = require(s && est && se, "bad arguments")) return rc;
  return guarded([&] {
    const auto r = cotether::mc::estimate_metrics(s->e, {mod_a, mod_b}, {n_hops, 1e-10},
                                                  gamma_th);
    est[0] = r.abep;
    est[1] = r.mean_sinr;
    est[2] = r.capacity;
    est[3] = r.outage;
    se[0] = r.abep_se;
    se[1] = r.mean_sinr_se;
    se[2] = r.capacity_se;
    se[3] = r.outage_se;
  });
}

void ct_samples_free(ct_samples* s) { delete s; }

ct_radio_params ct_default_radio_params(void) {
  const cotether::net::RadioParams p;
  return {p.p_enb, p.p_ap, p.f_cell, p.f_wlan, p.noise_power};
}

ct_status ct_scenario_load(const char* path, ct_scenario** out) {
  if (auto rc = require(path && out, "bad arguments")) return rc;
  return guarded([&] { *out = new ct_scenario{cotether::net::load_scenario(path)}; });
}

ct_status ct_scenario_generate(int n_ue, int m_ap, double cell_radius, uint64_t seed,
                               const ct_radio_params* radio, ct_scenario** out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] {
    *out = new ct_scenario{
        cotether::net::generate_uniform(n_ue, m_ap, cell_radius, seed, to_radio(radio))};
  });
}

ct_status ct_scenario_generate_multi_cell(int n_cells, int n_ue, int m_ap, double cell_radius,
                                          double site_ring_radius, uint64_t seed,
                                          const ct_radio_params* radio, ct_scenario** out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] {
    *out = new ct_scenario{cotether::net::generate_multi_cell(
        n_cells, n_ue, m_ap, cell_radius, site_ring_radius, seed, to_radio(radio))};
  });
}

ct_status ct_scenario_counts(const ct_scenario* s, int* n_enb, int* n_ap, int* n_ue) {
  if (auto rc = require(s && n_enb && n_ap && n_ue, "bad arguments")) return rc;
  *n_enb = static_cast<int>(s->s.enb_positions.size());
  *n_ap = static_cast<int>(s->s.ap_positions.size());
  *n_ue = static_cast<int>(s->s.ue_positions.size());
  return CT_OK;
}

void ct_scenario_free(ct_scenario* s) { delete s; }

ct_status ct_friis_mean_gain(double distance_m, double frequency_hz, double* out) {
  if (auto rc = require(out != nullptr, "out is NULL")) return rc;
  return guarded([&] { *out = cotether::net::friis_mean_gain(distance_m, frequency_hz); });
}

ct_status ct_budget_build(const ct_scenario* s, ct_budget** out) {
  if (auto rc = require(s && out, "bad arguments")) return rc;
  return guarded([&] { *out = new ct_budget{cotether::net::build_link_budget(s->s)}; });
}

ct_status ct_budget_counts(const ct_budget* b, int* n_enb, int* n_ap, int* n_ue) {
  if (auto rc = require(b && n_enb && n_ap && n_ue, "bad arguments")) return rc;
  *n_enb = b->b.n_enb();
  *n_ap = b->b.n_ap();
  *n_ue = b->b.n_ue();
  return CT_OK;
}

ct_status ct_budget_mean_snr(const ct_budget* b, int tx_kind, int tx_index, int rx_kind,
                             int rx_index, int band, double* out) {
  if (auto rc = require(b && out, "bad arguments")) return rc;
  return guarded([&] {
    using K = cotether::net::NodeRef::Kind;
    auto kind_of = [](int k) {
      if (k == 0) return K::enb;
      if (k == 1) return K::ap;
      if (k == 2) return K::ue;
      throw std::invalid_argument("node kind must be 0, 1 or 2");
    };
    *out = b->b.mean_snr({kind_of(tx_kind), tx_index}, {kind_of(rx_kind), rx_index},
                         band == 0 ? cotether::net::Band::cellular : cotether::net::Band::wlan);
  });
}

void ct_budget_free(ct_budget* b) { delete b; }

ct_status ct_linkconf_load(const char* path, ct_linkconf** out) {
  if (auto rc = require(path && out, "bad arguments")) return rc;
  return guarded([&] { *out = new ct_linkconf{cotether::net::AbstractBudget::load(path)}; });
}

int ct_linkconf_has(const ct_linkconf* c, const char* segment) {
  if (!c || !segment) return 0;
  try {
    return find_segment(c->ab, segment) != nullptr;
  } catch (const std::exception&) {
    return 0;
  }
}

ct_status ct_linkconf_dist(const ct_linkconf* c, const char* segment, ct_dist** out) {
  if (auto rc = require(c && segment && out, "bad arguments")) return rc;
  return guarded([&] { *out = new ct_dist{segment_dist(c->ab, segment)}; });
}

ct_status ct_linkconf_end_to_end(const ct_linkconf* c, ct_dist** out) {
  if (auto rc = require(c && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_dist{cotether::dist::end_to_end_distribution(
        segment_dist(c->ab, "ea"), segment_dist(c->ab, "au"), segment_dist(c->ab, "eu"))};
  });
}

void ct_linkconf_free(ct_linkconf* c) { delete c; }

ct_status ct_budget_ue_sinrs(const ct_budget* b, const int* serving, double* out_sinrs) {
  if (auto rc = require(b && serving && out_sinrs, "bad arguments")) return rc;
  return guarded([&] {
    const auto a = from_display(serving, b->b.n_ue(), b->b.n_enb(), b->b.n_ap());
    const auto v = cotether::opt::ue_sinrs(b->b, a);
    std::copy(v.begin(), v.end(), out_sinrs);
  });
}

ct_status ct_budget_objective(const ct_budget* b, const int* serving, ct_objective obj,
                              double* out) {
  if (auto rc = require(b && serving && out, "bad arguments")) return rc;
  return guarded([&] {
    const auto a = from_display(serving, b->b.n_ue(), b->b.n_enb(), b->b.n_ap());
    cotether::opt::Objective o;
    o.kind = obj == CT_OBJ_TOTAL ? cotether::opt::ObjectiveKind::total_sinr
                                 : cotether::opt::ObjectiveKind::maxmin_sinr;
    *out = cotether::opt::evaluate_objective(b->b, a, o);
  });
}

ct_status ct_optimize_exhaustive(const ct_budget* b, ct_objective obj, uint64_t cap,
                                 ct_opt_result** out) {
  if (auto rc = require(b && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_opt_result{cotether::opt::exhaustive_search(b->b, to_objective(obj), cap),
                             b->b.n_enb(), b->b.n_ue()};
  });
}

ct_status ct_optimize_greedy_multi_cell(const ct_budget* b, ct_opt_result** out) {
  if (auto rc = require(b && out, "bad arguments")) return rc;
  return guarded([&] {
    *out = new ct_opt_result{cotether::opt::greedy_multi_cell(b->b), b->b.n_enb(), b->b.n_ue()};
  });
}

ct_status ct_optimize_greedy_single_cell(const ct_budget* b, ct_objective obj, int q,
                                         uint64_t cap, ct_opt_result** out) {
  if (auto rc = require(b && out, "bad arguments")) return rc;
  return guarded([&] {
    auto result = obj == CT_OBJ_TOTAL
                      ? cotether::opt::greedy_single_cell_total(b->b, q, cap)
                      : cotether::opt::greedy_single_cell_maxmin(b->b, q, cap);
    *out = new ct_opt_result{std::move(result), b->b.n_enb(), b->b.n_ue()};
  });
}

double ct_opt_value(const ct_opt_result* r) { return r ? r->r.objective_value : 0.0; }

uint64_t ct_opt_evaluations(const ct_opt_result* r) { return r ? r->r.evaluations : 0; }

double ct_opt_formula_search_count(const ct_opt_result* r) {
  return r ? r->r.formula_search_count : 0.0;
}

ct_status ct_opt_assignment(const ct_opt_result* r, int* serving, size_t cap) {
  if (auto rc = require(r && serving, "bad arguments")) return rc;
  return guarded([&] {
    const auto& sv = r->r.assignment.serving;
    if (cap < sv.size()) throw std::invalid_argument("assignment buffer too small");
    for (std::size_t k = 0; k < sv.size(); ++k) serving[k] = to_display(sv[k], r->n_enb);
  });
}

uint64_t ct_opt_trace_length(const ct_opt_result* r) { return r ? r->r.trace.size() : 0; }

ct_status ct_opt_trace_entry(const ct_opt_result* r, uint64_t i, int* serving, size_t cap,
                             double* value) {
  if (auto rc = require(r && serving && value, "bad arguments")) return rc;
  return guarded([&] {
    if (i >= r->r.trace.size()) throw std::invalid_argument("trace index out of range");
    if (cap < static_cast<size_t>(r->n_ue))
      throw std::invalid_argument("trace buffer too small");
    const auto& entry = r->r.trace[i];
    for (int k = 0; k < r->n_ue; ++k)
      serving[k] = k < static_cast<int>(entry.serving.size())
                       ? to_display(entry.serving[k], r->n_enb)
                       : 0;
    *value = entry.value;
  });
}

void ct_opt_result_free(ct_opt_result* r) { delete r; }

ct_gain_spec ct_default_gain_spec(void) {
  ct_gain_spec s;
  s.multi_cell = 0;
  s.n_min = 2;
  s.n_max = 7;
  s.m_min = 1;
  s.m_max = 5;
  s.q = 2;
  s.replications = 200;
  s.seed = 1;
  s.cap = 10000000;
  s.include_exhaustive = 0;
  s.objective = CT_OBJ_TOTAL;
  s.cell_radius = 500.0;
  s.site_ring_radius = 1000.0;
  s.radio = ct_default_radio_params();
  return s;
}

ct_status ct_gain_curve(const ct_gain_spec* spec, ct_gain_row* rows, size_t rows_cap,
                        size_t* n_rows) {
  if (auto rc = require(spec && n_rows && (rows || rows_cap == 0), "bad arguments")) return rc;
  return guarded([&] {
    cotether::opt::GainSpec gs;
    gs.multi_cell = spec->multi_cell != 0;
    gs.n_min = spec->n_min;
    gs.n_max = spec->n_max;
    gs.m_min = spec->m_min;
    gs.m_max = spec->m_max;
    gs.q = spec->q;
    gs.replications = spec->replications;
    gs.seed = spec->seed;
    gs.cap = spec->cap;
    gs.include_exhaustive = spec->include_exhaustive != 0;
    gs.objective = spec->objective == CT_OBJ_TOTAL ? cotether::opt::ObjectiveKind::total_sinr
                                                   : cotether::opt::ObjectiveKind::maxmin_sinr;
    gs.cell_radius = spec->cell_radius;
    gs.site_ring_radius = spec->site_ring_radius;
    gs.radio = to_radio(&spec->radio);
    const auto out = cotether::opt::gain_curve(gs);
    *n_rows = out.size();
    for (std::size_t i = 0; i < out.size() && i < rows_cap; ++i) {
      rows[i].n_ue = out[i].n_ue;
      rows[i].m_ap = out[i].m_ap;
      rows[i].scheme = out[i].scheme == "greedy" ? 0 : 1;
      rows[i].gain_mean = out[i].gain_mean;
      rows[i].gain_ci_low = out[i].gain_ci_low;
      rows[i].gain_ci_high = out[i].gain_ci_high;
      rows[i].mean_evaluations = out[i].mean_evaluations;
    }
  });
}

}  // extern "C"
