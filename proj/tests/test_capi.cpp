// Exercises the shared-library C API end to end: handles, error codes and
// the numerical surfaces the CLI depends on.
#include <cotether.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <doctest.h>
#include <fstream>
#include <string>

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and error reporting") {
  CHECK(std::strcmp(ct_version(), CT_VERSION) == 0);
  double out = 0.0;
  CHECK(ct_upper_incomplete_gamma(1.0, -1.0, &out) == CT_ERR_DOMAIN);
  CHECK(std::strlen(ct_last_error()) > 0);
}

TEST_CASE("special functions") {
  double g = 0.0;
  REQUIRE(ct_upper_incomplete_gamma(0.0, 1.0, &g) == CT_OK);
  CHECK(std::abs(g - 0.21938393439552027) < 1e-12);
  double u = 0.0;
  REQUIRE(ct_tricomi_u(2.0, 3.0, 5.0, &u) == CT_OK);
  CHECK(std::abs(u - 0.04) < 1e-12);
}

TEST_CASE("distributions, metrics and simulation") {
  ct_dist* conv = nullptr;
  REQUIRE(ct_dist_form_a_iid(1, 1.0, 1.0, &conv) == CT_OK);
  double c = 0.0;
  REQUIRE(ct_dist_cdf(conv, 1.0, &c) == CT_OK);
  CHECK(std::abs(c - 0.81606027941427884) < 1e-12);
  double p = 0.0;
  REQUIRE(ct_dist_pdf(conv, 0.5, &p) == CT_OK);
  CHECK(p > 0.0);

  char buf[128];
  REQUIRE(ct_dist_describe(conv, buf, sizeof buf) == CT_OK);
  CHECK(std::string(buf) == "form_a_iid{X=1, Y=1, Z=1}");

  // ill-conditioned parameters surface as the dedicated status
  ct_dist* bad = nullptr;
  const double zs[] = {1.0, 1.0 + 1e-8};
  CHECK(ct_dist_form_a_ind(1.0, zs, 2, &bad) == CT_ERR_ILL_CONDITIONED);

  double abep = 0.0, mean = 0.0, cap = 0.0, bound = 0.0, op = 0.0;
  ct_dist* d = nullptr;
  REQUIRE(ct_dist_form_a_iid(2, 10.0, 1.0, &d) == CT_OK);
  double ma = 0.0, mb = 0.0;
  REQUIRE(ct_modulation_preset("dbpsk", &ma, &mb) == CT_OK);
  REQUIRE(ct_abep(d, ma, mb, &abep) == CT_OK);
  CHECK(std::abs(abep - 0.11129783731902728) < 1e-9);
  REQUIRE(ct_mean_sinr(d, &mean) == CT_OK);
  CHECK(std::abs(mean - 4.0365263767680593) < 1e-9);
  REQUIRE(ct_ergodic_capacity(d, 1, &cap) == CT_OK);
  REQUIRE(ct_capacity_upper_bound(d, 1, &bound) == CT_OK);
  CHECK(bound >= cap);
  REQUIRE(ct_outage_probability(d, 2.0, &op) == CT_OK);
  CHECK(op > 0.0);
  CHECK(op < 1.0);

  // composed end-to-end distribution
  ct_dist *ea = nullptr, *au = nullptr, *eu = nullptr, *tot = nullptr;
  REQUIRE(ct_dist_form_b_iid(2, 2, 50.0, 1.0, 3.0, &ea) == CT_OK);
  REQUIRE(ct_dist_form_a_iid(2, 40.0, 2.0, &au) == CT_OK);
  REQUIRE(ct_dist_form_b_iid(1, 2, 60.0, 0.5, 4.0, &eu) == CT_OK);
  REQUIRE(ct_dist_end_to_end(ea, au, eu, &tot) == CT_OK);
  double ftot = 0.0;
  REQUIRE(ct_dist_cdf(tot, 5.0, &ftot) == CT_OK);
  CHECK(std::abs(ftot - 0.37742497974733871) < 1e-12);

  // Monte Carlo agreement with the analytic cdf
  ct_samples* s = nullptr;
  REQUIRE(ct_simulate(tot, 200000, 42, 4, &s) == CT_OK);
  CHECK(ct_samples_count(s) == 200000);
  double ks = 0.0;
  REQUIRE(ct_ks_distance(s, tot, &ks) == CT_OK);
  CHECK(ks < 0.01);
  double first = 0.0, second = 0.0;
  REQUIRE(ct_samples_get(s, 0, &first) == CT_OK);
  REQUIRE(ct_samples_get(s, 1, &second) == CT_OK);
  CHECK(first <= second);
  double est[4], se[4];
  REQUIRE(ct_estimate_metrics(s, ma, mb, 2, 1.0, est, se) == CT_OK);
  for (double v : se) CHECK(v >= 0.0);

  ct_samples_free(s);
  ct_dist_free(tot);
  ct_dist_free(eu);
  ct_dist_free(au);
  ct_dist_free(ea);
  ct_dist_free(d);
  ct_dist_free(conv);
}

TEST_CASE("scenario, budget and optimization") {
  double gain = 0.0;
  REQUIRE(ct_friis_mean_gain(100.0, 800e6, &gain) == CT_OK);
  CHECK(std::abs(gain / 8.8928650892866414e-8 - 1.0) < 1e-12);

  ct_scenario* scen = nullptr;
  REQUIRE(ct_scenario_generate(5, 3, 500.0, 7, nullptr, &scen) == CT_OK);
  int ne = 0, na = 0, nu = 0;
  REQUIRE(ct_scenario_counts(scen, &ne, &na, &nu) == CT_OK);
  CHECK(ne == 1);
  CHECK(na == 3);
  CHECK(nu == 5);

  ct_budget* b = nullptr;
  REQUIRE(ct_budget_build(scen, &b) == CT_OK);
  double snr = 0.0;
  REQUIRE(ct_budget_mean_snr(b, 0, 0, 2, 0, 0, &snr) == CT_OK);
  CHECK(snr > 0.0);

  ct_opt_result* greedy = nullptr;
  REQUIRE(ct_optimize_greedy_single_cell(b, CT_OBJ_TOTAL, 2, 1000000, &greedy) == CT_OK);
  ct_opt_result* ex = nullptr;
  REQUIRE(ct_optimize_exhaustive(b, CT_OBJ_TOTAL, 1000000, &ex) == CT_OK);
  CHECK(ct_opt_evaluations(ex) == 1024);  // (3+1)^5
  CHECK(ct_opt_value(greedy) <= ct_opt_value(ex) * (1.0 + 1e-12));
  int serving[5];
  REQUIRE(ct_opt_assignment(ex, serving, 5) == CT_OK);
  for (int k = 0; k < 5; ++k) {
    CHECK(serving[k] >= 1);
    CHECK(serving[k] <= 4);
  }
  double obj = 0.0;
  REQUIRE(ct_budget_objective(b, serving, CT_OBJ_TOTAL, &obj) == CT_OK);
  CHECK(obj == ct_opt_value(ex));
  double sinrs[5];
  REQUIRE(ct_budget_ue_sinrs(b, serving, sinrs) == CT_OK);
  double total = 0.0;
  for (double v : sinrs) total += v;
  CHECK(std::abs(total / 5.0 - obj) < 1e-12 * obj);

  // trace access
  CHECK(ct_opt_trace_length(ex) == 1024);
  double val = 0.0;
  int tserv[5];
  REQUIRE(ct_opt_trace_entry(ex, 0, tserv, 5, &val) == CT_OK);
  CHECK(val > 0.0);

  // cap exceeded is a distinct status
  ct_opt_result* too_big = nullptr;
  CHECK(ct_optimize_exhaustive(b, CT_OBJ_TOTAL, 10, &too_big) == CT_ERR_CAP_EXCEEDED);

  ct_opt_result_free(ex);
  ct_opt_result_free(greedy);
  ct_budget_free(b);
  ct_scenario_free(scen);

  // multi-cell generation and greedy
  ct_scenario* mc = nullptr;
  REQUIRE(ct_scenario_generate_multi_cell(3, 3, 2, 500.0, 1000.0, 11, nullptr, &mc) == CT_OK);
  ct_budget* mb2 = nullptr;
  REQUIRE(ct_budget_build(mc, &mb2) == CT_OK);
  ct_opt_result* gm = nullptr;
  REQUIRE(ct_optimize_greedy_multi_cell(mb2, &gm) == CT_OK);
  CHECK(ct_opt_evaluations(gm) == 6);  // N*M
  ct_opt_result_free(gm);
  ct_budget_free(mb2);
  ct_scenario_free(mc);
}

TEST_CASE("scenario and abstract-budget files") {
  const char* scen_path = "capi_test_scenario.txt";
  {
    std::ofstream f(scen_path);
    f << "cell_radius 500\nseed 3\nenb 0 0\nue 100 0\nap 50 50\n";
  }
  ct_scenario* s = nullptr;
  REQUIRE(ct_scenario_load(scen_path, &s) == CT_OK);
  ct_scenario_free(s);
  std::remove(scen_path);
  CHECK(ct_scenario_load("does_not_exist.txt", &s) == CT_ERR_INVALID);

  const char* budget_path = "capi_test_budget.csv";
  {
    std::ofstream f(budget_path);
    f << "segment,role,mean_snr\n";
    f << "conv,desired,10000\n";
    for (int i = 0; i < 24; ++i) f << "conv,inr,10\n";
    f << "eu,desired,10000\n";
    for (int i = 0; i < 12; ++i) f << "eu,inr_ue,10\neu,inr_ap,10\n";
    f << "ea,desired,10000\n";
    for (int i = 0; i < 12; ++i) f << "ea,inr_ue,10\nea,inr_ap,10\n";
    f << "au,desired,10000\n";
    for (int i = 0; i < 12; ++i) f << "au,inr,10\n";
  }
  ct_linkconf* lc = nullptr;
  REQUIRE(ct_linkconf_load(budget_path, &lc) == CT_OK);
  CHECK(ct_linkconf_has(lc, "conv") == 1);
  CHECK(ct_linkconf_has(lc, "eu") == 1);
  ct_dist* conv = nullptr;
  REQUIRE(ct_linkconf_dist(lc, "conv", &conv) == CT_OK);
  char buf[256];
  REQUIRE(ct_dist_describe(conv, buf, sizeof buf) == CT_OK);
  CHECK(std::string(buf) == "form_a_iid{X=24, Y=10000, Z=10}");
  ct_dist* tot = nullptr;
  REQUIRE(ct_linkconf_end_to_end(lc, &tot) == CT_OK);
  // hybrid outage never exceeds the conventional one
  for (double th : {0.5, 5.0, 50.0, 400.0}) {
    double oc = 0.0, oh = 0.0;
    REQUIRE(ct_outage_probability(conv, th, &oc) == CT_OK);
    REQUIRE(ct_outage_probability(tot, th, &oh) == CT_OK);
    CHECK(oh <= oc + 1e-15);
  }
  ct_dist_free(tot);
  ct_dist_free(conv);
  ct_linkconf_free(lc);
  std::remove(budget_path);
}

TEST_CASE("gain curve over the C API") {
  ct_gain_spec spec = ct_default_gain_spec();
  spec.n_min = spec.n_max = 2;
  spec.m_min = spec.m_max = 2;
  spec.replications = 20;
  spec.seed = 5;
  ct_gain_row rows[4];
  size_t n_rows = 0;
  REQUIRE(ct_gain_curve(&spec, rows, 4, &n_rows) == CT_OK);
  REQUIRE(n_rows == 1);
  CHECK(rows[0].n_ue == 2);
  CHECK(rows[0].m_ap == 2);
  CHECK(rows[0].scheme == 0);
  CHECK(rows[0].gain_mean > 1.0);
}

TEST_SUITE_END();
