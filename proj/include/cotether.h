/*
 * cotether — hybrid cellular/WLAN SINR analysis toolkit, C API.
 *
 * All functions return CT_OK (0) on success or a ct_status error code;
 * results come back through out-parameters. ct_last_error() returns a
 * thread-local message for the most recent failure on the calling thread.
 * Objects are opaque handles released with the matching *_free function.
 */
#ifndef COTETHER_H
#define COTETHER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CT_VERSION "0.1.0"

typedef enum ct_status {
  CT_OK = 0,
  CT_ERR_INVALID = 1,        /* bad argument or malformed input file */
  CT_ERR_DOMAIN = 2,         /* argument outside the mathematical domain */
  CT_ERR_ILL_CONDITIONED = 3,/* near-equal parameters; perturb or use MC */
  CT_ERR_CAP_EXCEEDED = 4,   /* enumeration larger than the configured cap */
  CT_ERR_NO_CONVERGENCE = 5, /* quadrature failed to reach tolerance */
  CT_ERR_OVERFLOW = 6,
  CT_ERR_INTERNAL = 7
} ct_status;

const char* ct_version(void);
const char* ct_last_error(void);

/* ---- special functions ---- */

ct_status ct_upper_incomplete_gamma(double a, double x, double* out);
ct_status ct_tricomi_u(double a, double b, double z, double* out);

/* ---- SINR distributions ---- */

typedef struct ct_dist ct_dist;

ct_status ct_dist_form_a_iid(int x, double y, double z, ct_dist** out);
ct_status ct_dist_form_a_ind(double y, const double* z, size_t n, ct_dist** out);
ct_status ct_dist_form_b_iid(int x1, int x2, double y, double z1, double z2, ct_dist** out);
ct_status ct_dist_form_b_ind(double y, const double* z1, size_t n1, const double* z2, size_t n2,
                             ct_dist** out);
ct_status ct_dist_min(const ct_dist* left, const ct_dist* right, ct_dist** out);
ct_status ct_dist_max(const ct_dist* left, const ct_dist* right, ct_dist** out);
/* max(eu, min(ea, au)) */
ct_status ct_dist_end_to_end(const ct_dist* ea, const ct_dist* au, const ct_dist* eu,
                             ct_dist** out);
void ct_dist_free(ct_dist* d);

ct_status ct_dist_pdf(const ct_dist* d, double gamma, double* out);
ct_status ct_dist_cdf(const ct_dist* d, double gamma, double* out);
/* human-readable variant description; buffer is always NUL-terminated */
ct_status ct_dist_describe(const ct_dist* d, char* buf, size_t buflen);

/* ---- performance metrics ---- */

ct_status ct_abep(const ct_dist* d, double mod_a, double mod_b, double* out);
ct_status ct_mean_sinr(const ct_dist* d, double* out);
ct_status ct_ergodic_capacity(const ct_dist* d, int n_hops, double* out);
ct_status ct_capacity_upper_bound(const ct_dist* d, int n_hops, double* out);
ct_status ct_outage_probability(const ct_dist* d, double gamma_th, double* out);
/* modulation presets: "dbpsk", "ncfsk", "bpsk-approx" */
ct_status ct_modulation_preset(const char* name, double* mod_a, double* mod_b);

/* ---- Monte Carlo ---- */

typedef struct ct_samples ct_samples;

/* n samples of the defining SINR ratio, deterministic in (seed); workers
 * only partition the index range and never change the result */
ct_status ct_simulate(const ct_dist* d, uint64_t n, uint64_t seed, int n_workers,
                      ct_samples** out);
uint64_t ct_samples_count(const ct_samples* s);
ct_status ct_samples_get(const ct_samples* s, uint64_t i, double* out); /* ascending order */
ct_status ct_samples_mean(const ct_samples* s, double* out);
ct_status ct_ks_distance(const ct_samples* s, const ct_dist* d, double* out);
/* est/se order: abep, mean_sinr, capacity, outage */
ct_status ct_estimate_metrics(const ct_samples* s, double mod_a, double mod_b, int n_hops,
                              double gamma_th, double est[4], double se[4]);
void ct_samples_free(ct_samples* s);

/* ---- scenarios and link budgets ---- */

typedef struct ct_scenario ct_scenario;
typedef struct ct_budget ct_budget;

typedef struct ct_radio_params {
  double p_enb;       /* W */
  double p_ap;        /* W */
  double f_cell;      /* Hz */
  double f_wlan;      /* Hz */
  double noise_power; /* W/Hz-equivalent scalar */
} ct_radio_params;

/* 10 W / 0.1 W / 800 MHz / 2.4 GHz / 1e-10 */
ct_radio_params ct_default_radio_params(void);

ct_status ct_scenario_load(const char* path, ct_scenario** out);
ct_status ct_scenario_generate(int n_ue, int m_ap, double cell_radius, uint64_t seed,
                               const ct_radio_params* radio /* NULL for defaults */,
                               ct_scenario** out);
ct_status ct_scenario_generate_multi_cell(int n_cells, int n_ue, int m_ap, double cell_radius,
                                          double site_ring_radius, uint64_t seed,
                                          const ct_radio_params* radio, ct_scenario** out);
ct_status ct_scenario_counts(const ct_scenario* s, int* n_enb, int* n_ap, int* n_ue);
void ct_scenario_free(ct_scenario* s);

ct_status ct_friis_mean_gain(double distance_m, double frequency_hz, double* out);

ct_status ct_budget_build(const ct_scenario* s, ct_budget** out);
ct_status ct_budget_counts(const ct_budget* b, int* n_enb, int* n_ap, int* n_ue);
/* tx_kind/rx_kind: 0 eNB, 1 AP, 2 UE; band: 0 cellular, 1 WLAN */
ct_status ct_budget_mean_snr(const ct_budget* b, int tx_kind, int tx_index, int rx_kind,
                             int rx_index, int band, double* out);
void ct_budget_free(ct_budget* b);

/* ---- abstract budgets (per-link mean SNR/INR tables) ---- */

typedef struct ct_linkconf ct_linkconf;

ct_status ct_linkconf_load(const char* path, ct_linkconf** out);
/* segments: "conv", "eu", "ea", "au" */
int ct_linkconf_has(const ct_linkconf* c, const char* segment);
ct_status ct_linkconf_dist(const ct_linkconf* c, const char* segment, ct_dist** out);
/* requires eu, ea and au segments */
ct_status ct_linkconf_end_to_end(const ct_linkconf* c, ct_dist** out);
void ct_linkconf_free(ct_linkconf* c);

/* ---- topology optimization ---- */

typedef struct ct_opt_result ct_opt_result;

typedef enum ct_objective { CT_OBJ_TOTAL = 0, CT_OBJ_MAXMIN = 1 } ct_objective;

/* per-UE end-to-end SINRs on the mean-gain budget; serving[k] is the 1-based
 * serving-point id (eNBs first, then APs) */
ct_status ct_budget_ue_sinrs(const ct_budget* b, const int* serving, double* out_sinrs);
ct_status ct_budget_objective(const ct_budget* b, const int* serving, ct_objective obj,
                              double* out);

ct_status ct_optimize_exhaustive(const ct_budget* b, ct_objective obj, uint64_t cap,
                                 ct_opt_result** out);
ct_status ct_optimize_greedy_multi_cell(const ct_budget* b, ct_opt_result** out);
ct_status ct_optimize_greedy_single_cell(const ct_budget* b, ct_objective obj, int q,
                                         uint64_t cap, ct_opt_result** out);

double ct_opt_value(const ct_opt_result* r);
uint64_t ct_opt_evaluations(const ct_opt_result* r);
double ct_opt_formula_search_count(const ct_opt_result* r);
/* fills serving[0..n_ue) with 1-based serving-point ids */
ct_status ct_opt_assignment(const ct_opt_result* r, int* serving, size_t cap);
uint64_t ct_opt_trace_length(const ct_opt_result* r);
/* candidate at trace step i; prefix candidates fill only their UEs and set
 * the rest to 0 */
ct_status ct_opt_trace_entry(const ct_opt_result* r, uint64_t i, int* serving, size_t cap,
                             double* value);
void ct_opt_result_free(ct_opt_result* r);

/* ---- gain curves ---- */

typedef struct ct_gain_spec {
  int multi_cell;         /* 0 single cell, 1 multi-cell */
  int n_min, n_max;       /* UE counts */
  int m_min, m_max;       /* AP counts */
  int q;                  /* greedy initialization size */
  int replications;
  uint64_t seed;
  uint64_t cap;
  int include_exhaustive; /* also run the exhaustive oracle */
  ct_objective objective;
  double cell_radius;
  double site_ring_radius;
  ct_radio_params radio;
} ct_gain_spec;

ct_gain_spec ct_default_gain_spec(void);

typedef struct ct_gain_row {
  int32_t n_ue;
  int32_t m_ap;
  int32_t scheme; /* 0 greedy, 1 exhaustive */
  double gain_mean, gain_ci_low, gain_ci_high;
  double mean_evaluations;
} ct_gain_row;

/* writes up to rows_cap rows; *n_rows receives the full count required,
 * regardless of capacity */
ct_status ct_gain_curve(const ct_gain_spec* spec, ct_gain_row* rows, size_t rows_cap,
                        size_t* n_rows);

#ifdef __cplusplus
}
#endif

#endif /* COTETHER_H */
