// cotether CLI: closed-form analysis, Monte Carlo validation and topology
// optimization for the hybrid cellular/WLAN model, driven entirely through
// the C API in cotether.h.
//
// Exit codes: 0 success, 2 bad invocation or malformed input, 3 search cap
// exceeded, 4 validation or trend failure.

#include <cotether.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpec = 2;
constexpr int kExitCap = 3;
constexpr int kExitValidation = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

void check(ct_status rc, const std::string& what) {
  if (rc == CT_OK) return;
  const int code = rc == CT_ERR_CAP_EXCEEDED ? kExitCap : kExitSpec;
  fail(code, what + ": " + ct_last_error());
}

// RAII wrappers over the C handles
using DistPtr = std::unique_ptr<ct_dist, decltype(&ct_dist_free)>;
using SamplesPtr = std::unique_ptr<ct_samples, decltype(&ct_samples_free)>;
using ScenarioPtr = std::unique_ptr<ct_scenario, decltype(&ct_scenario_free)>;
using BudgetPtr = std::unique_ptr<ct_budget, decltype(&ct_budget_free)>;
using LinkconfPtr = std::unique_ptr<ct_linkconf, decltype(&ct_linkconf_free)>;
using OptPtr = std::unique_ptr<ct_opt_result, decltype(&ct_opt_result_free)>;

DistPtr wrap(ct_dist* d) { return DistPtr(d, &ct_dist_free); }
OptPtr wrap(ct_opt_result* r) { return OptPtr(r, &ct_opt_result_free); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Output file with the provenance header; the version line is the only one
// allowed to differ between otherwise identical runs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& spec, std::uint64_t seed) {
    if (path.empty() || path == "-") {
      out_ = &std::cout;
    } else {
      file_.open(path);
      if (!file_) fail(kExitSpec, "cannot open output file '" + path + "'");
      out_ = &file_;
    }
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a(spec)));
    *out_ << "# cotether output\n";
    *out_ << "# spec: " << spec << "\n";
    *out_ << "# spec_hash: " << hash << "\n";
    *out_ << "# seed: " << seed << "\n";
    *out_ << "# version: " << ct_version() << "\n";
  }
  std::ostream& os() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

struct GammaGrid {
  double lo = 0.1, hi = 20.0;
  int steps = 20;
  bool log_spaced = false;

  std::vector<double> points() const {
    std::vector<double> g;
    if (steps == 1) {
      g.push_back(lo);
      return g;
    }
    for (int i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / (steps - 1);
      g.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return g;
  }
};

GammaGrid parse_grid(const std::string& s, bool log_spaced) {
  GammaGrid g;
  g.log_spaced = log_spaced;
  char colon1 = 0, colon2 = 0;
  std::istringstream is(s);
  if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.steps) || colon1 != ':' || colon2 != ':')
    fail(kExitSpec, "--gamma-th expects min:max:steps, got '" + s + "'");
  if (!(g.lo >= 0.0) || !(g.hi > g.lo) || g.steps < 1)
    fail(kExitSpec, "--gamma-th grid must be non-empty and increasing");
  if (log_spaced && g.lo <= 0.0) fail(kExitSpec, "--log-grid requires min > 0");
  return g;
}

// The abstract-budget segments plus the composed hybrid end-to-end output.
struct SegmentDists {
  std::vector<std::pair<std::string, DistPtr>> dists;
};

SegmentDists load_segments(const std::string& budget_path, const std::string& only) {
  ct_linkconf* raw = nullptr;
  check(ct_linkconf_load(budget_path.c_str(), &raw), "loading budget");
  LinkconfPtr lc(raw, &ct_linkconf_free);
  SegmentDists out;
  auto add = [&](const std::string& name) {
    if (!only.empty() && only != name) return;
    if (name == "hybrid") {
      if (ct_linkconf_has(lc.get(), "eu") && ct_linkconf_has(lc.get(), "ea") &&
          ct_linkconf_has(lc.get(), "au")) {
        ct_dist* d = nullptr;
        check(ct_linkconf_end_to_end(lc.get(), &d), "composing hybrid distribution");
        out.dists.emplace_back(name, wrap(d));
      } else if (!only.empty()) {
        fail(kExitSpec, "budget lacks the eu/ea/au segments needed for 'hybrid'");
      }
      return;
    }
    if (!ct_linkconf_has(lc.get(), name.c_str())) {
      if (!only.empty()) fail(kExitSpec, "budget has no segment '" + name + "'");
      return;
    }
    ct_dist* d = nullptr;
    check(ct_linkconf_dist(lc.get(), name.c_str(), &d), "building segment " + name);
    out.dists.emplace_back(name, wrap(d));
  };
  for (const char* name : {"conv", "eu", "ea", "au", "hybrid"}) add(name);
  if (out.dists.empty()) fail(kExitSpec, "no usable segments in '" + budget_path + "'");
  return out;
}

struct ModSpec {
  double a = 0.5, b = 1.0;
  std::string name = "dbpsk";
};

ModSpec resolve_modulation(const std::string& name, const std::string& custom) {
  ModSpec m;
  if (!custom.empty()) {
    std::istringstream is(custom);
    char colon = 0;
    if (!(is >> m.a >> colon >> m.b) || colon != ':')
      fail(kExitSpec, "--mod-ab expects A:B, got '" + custom + "'");
    m.name = "custom";
    return m;
  }
  m.name = name;
  check(ct_modulation_preset(name.c_str(), &m.a, &m.b), "resolving modulation");
  return m;
}

// ---------------- analyze ----------------

int run_analyze(const std::string& budget, const std::string& segment, const GammaGrid& grid,
                const ModSpec& mod, int nh, const std::string& out_path,
                const std::string& spec, std::uint64_t seed) {
  auto segs = load_segments(budget, segment);
  CsvWriter csv(out_path, spec, seed);
  csv.os() << "metric,segment,gamma_th,value\n";
  for (const auto& [name, d] : segs.dists) {
    double abep = 0.0, mean = 0.0, cap = 0.0, bound = 0.0;
    check(ct_abep(d.get(), mod.a, mod.b, &abep), "abep(" + name + ")");
    check(ct_mean_sinr(d.get(), &mean), "mean_sinr(" + name + ")");
    const int hops = name == "hybrid" ? nh : 1;
    check(ct_ergodic_capacity(d.get(), hops, &cap), "capacity(" + name + ")");
    check(ct_capacity_upper_bound(d.get(), hops, &bound), "capacity_bound(" + name + ")");
    csv.os() << "abep," << name << ",," << fmt(abep) << "\n";
    csv.os() << "mean_sinr," << name << ",," << fmt(mean) << "\n";
    csv.os() << "capacity_nh" << hops << "," << name << ",," << fmt(cap) << "\n";
    csv.os() << "capacity_bound_nh" << hops << "," << name << ",," << fmt(bound) << "\n";
    for (double th : grid.points()) {
      double op = 0.0;
      check(ct_outage_probability(d.get(), th, &op), "outage(" + name + ")");
      csv.os() << "outage," << name << "," << fmt(th) << "," << fmt(op) << "\n";
    }
  }
  return kExitOk;
}

// ---------------- simulate / validate ----------------

int run_simulate(const std::string& budget, const std::string& segment, std::uint64_t samples,
                 std::uint64_t seed, int workers, const ModSpec& mod, int nh, double gamma_th,
                 double ks_threshold, bool validate, const std::string& out_path,
                 const std::string& spec) {
  auto segs = load_segments(budget, segment);
  CsvWriter csv(out_path, spec, seed);
  csv.os() << "segment,gamma,ecdf,analytic_cdf,abs_diff\n";
  bool all_ok = true;
  std::uint64_t seg_seed = seed;
  for (const auto& [name, d] : segs.dists) {
    ct_samples* raw = nullptr;
    check(ct_simulate(d.get(), samples, seg_seed, workers, &raw), "simulating " + name);
    SamplesPtr s(raw, &ct_samples_free);
    double ks = 0.0;
    check(ct_ks_distance(s.get(), d.get(), &ks), "ks_distance");
    double est[4], se[4];
    check(ct_estimate_metrics(s.get(), mod.a, mod.b, name == "hybrid" ? nh : 1, gamma_th, est,
                              se),
          "estimate_metrics");
    const std::uint64_t n = ct_samples_count(s.get());
    // CDF table on an even quantile grid of the sorted samples
    const std::uint64_t points = std::min<std::uint64_t>(200, n);
    for (std::uint64_t i = 0; i < points; ++i) {
      const std::uint64_t idx = std::min<std::uint64_t>(
          n - 1, static_cast<std::uint64_t>((i + 0.5) * static_cast<double>(n) / points));
      double x = 0.0;
      check(ct_samples_get(s.get(), idx, &x), "sample access");
      double analytic = 0.0;
      check(ct_dist_cdf(d.get(), x, &analytic), "cdf");
      const double ecdf = static_cast<double>(idx + 1) / static_cast<double>(n);
      csv.os() << name << "," << fmt(x) << "," << fmt(ecdf) << "," << fmt(analytic) << ","
               << fmt(std::abs(ecdf - analytic)) << "\n";
    }
    csv.os() << "# estimates segment=" << name << " abep=" << fmt(est[0])
             << " abep_se=" << fmt(se[0]) << " mean_sinr=" << fmt(est[1])
             << " mean_sinr_se=" << fmt(se[1]) << " capacity=" << fmt(est[2])
             << " capacity_se=" << fmt(se[2]) << " outage=" << fmt(est[3])
             << " outage_se=" << fmt(se[3]) << "\n";
    csv.os() << "# ks segment=" << name << " distance=" << fmt(ks) << " samples=" << n << "\n";
    if (validate) {
      char desc[512];
      check(ct_dist_describe(d.get(), desc, sizeof desc), "describe");
      const bool ok = ks <= ks_threshold;
      all_ok = all_ok && ok;
      std::cout << (ok ? "[PASS] " : "[FAIL] ") << "segment " << name << ": KS " << fmt(ks)
                << (ok ? " <= " : " > ") << fmt(ks_threshold) << " at " << n
                << " samples, seed " << seg_seed << ", " << desc << "\n";
    }
    ++seg_seed;
  }
  if (validate && !all_ok) return kExitValidation;
  return kExitOk;
}

// ---------------- optimize ----------------

BudgetPtr make_budget(const std::string& scenario_path, int gen_ue, int gen_ap, int cells,
                      double radius, double ring, std::uint64_t seed) {
  ct_scenario* raw = nullptr;
  if (!scenario_path.empty()) {
    check(ct_scenario_load(scenario_path.c_str(), &raw), "loading scenario");
  } else if (gen_ue > 0) {
    if (cells > 1)
      check(ct_scenario_generate_multi_cell(cells, gen_ue, gen_ap, radius, ring, seed, nullptr,
                                            &raw),
            "generating scenario");
    else
      check(ct_scenario_generate(gen_ue, gen_ap, radius, seed, nullptr, &raw),
            "generating scenario");
  } else {
    fail(kExitSpec, "optimize needs --scenario or --gen-ue/--gen-ap");
  }
  ScenarioPtr scen(raw, &ct_scenario_free);
  ct_budget* braw = nullptr;
  check(ct_budget_build(scen.get(), &braw), "building link budget");
  return BudgetPtr(braw, &ct_budget_free);
}

void emit_opt_result(std::ostream& os, const std::string& scheme, const std::string& objective,
                     const ct_budget* budget, const ct_opt_result* r) {
  int ne = 0, na = 0, nu = 0;
  check(ct_budget_counts(budget, &ne, &na, &nu), "budget counts");
  std::vector<int> serving(nu);
  check(ct_opt_assignment(r, serving.data(), serving.size()), "assignment");
  std::ostringstream assign;
  for (int k = 0; k < nu; ++k) assign << (k ? " " : "") << serving[k];
  os << scheme << "," << objective << "," << fmt(ct_opt_value(r)) << ","
     << ct_opt_evaluations(r) << "," << fmt(ct_opt_formula_search_count(r)) << ",\""
     << assign.str() << "\"\n";
}

int run_optimize(const std::string& scenario_path, int gen_ue, int gen_ap, int cells,
                 double radius, double ring, std::uint64_t seed, const std::string& objective,
                 int q, std::uint64_t cap, bool exhaustive, bool gain_mode,
                 const std::string& n_range, const std::string& m_range, int replications,
                 const std::string& out_path, const std::string& trace_path,
                 const std::string& spec) {
  if (objective != "total" && objective != "maxmin")
    fail(kExitSpec, "--objective must be total or maxmin");
  const ct_objective obj = objective == "maxmin" ? CT_OBJ_MAXMIN : CT_OBJ_TOTAL;

  if (gain_mode) {
    ct_gain_spec gs = ct_default_gain_spec();
    gs.multi_cell = cells > 1;
    gs.q = q;
    gs.cap = cap;
    gs.seed = seed;
    gs.replications = replications;
    gs.include_exhaustive = exhaustive ? 1 : 0;
    gs.objective = obj;
    gs.cell_radius = radius;
    gs.site_ring_radius = ring;
    auto parse_range = [](const std::string& s, int& lo, int& hi) {
      char colon = 0;
      std::istringstream is(s);
      if (!(is >> lo >> colon >> hi) || colon != ':' || lo < 0 || hi < lo)
        fail(kExitSpec, "range expects lo:hi, got '" + s + "'");
    };
    parse_range(n_range, gs.n_min, gs.n_max);
    parse_range(m_range, gs.m_min, gs.m_max);
    const std::size_t max_rows =
        static_cast<std::size_t>(gs.n_max - gs.n_min + 1) * (gs.m_max - gs.m_min + 1) * 2;
    std::vector<ct_gain_row> rows(max_rows);
    std::size_t n_rows = 0;
    check(ct_gain_curve(&gs, rows.data(), rows.size(), &n_rows), "gain curve");
    CsvWriter csv(out_path, spec, seed);
    csv.os() << "N,M,scheme,gain_mean,gain_ci_low,gain_ci_high,evaluations\n";
    for (std::size_t i = 0; i < n_rows; ++i)
      csv.os() << rows[i].n_ue << "," << rows[i].m_ap << ","
               << (rows[i].scheme == 0 ? "greedy" : "exhaustive") << ","
               << fmt(rows[i].gain_mean) << "," << fmt(rows[i].gain_ci_low) << ","
               << fmt(rows[i].gain_ci_high) << "," << fmt(rows[i].mean_evaluations) << "\n";
    return kExitOk;
  }

  auto budget = make_budget(scenario_path, gen_ue, gen_ap, cells, radius, ring, seed);
  int ne = 0, na = 0, nu = 0;
  check(ct_budget_counts(budget.get(), &ne, &na, &nu), "budget counts");
  if (nu == 0) fail(kExitSpec, "scenario has no UEs to assign");

  CsvWriter csv(out_path, spec, seed);
  csv.os() << "scheme,objective,value,evaluations,formula_count,assignment\n";

  OptPtr greedy(nullptr, &ct_opt_result_free);
  {
    ct_opt_result* raw = nullptr;
    if (ne > 1)
      check(ct_optimize_greedy_multi_cell(budget.get(), &raw), "multi-cell greedy");
    else
      check(ct_optimize_greedy_single_cell(budget.get(), obj, std::min(q, nu), cap, &raw),
            "single-cell greedy");
    greedy = wrap(raw);
  }
  emit_opt_result(csv.os(), ne > 1 ? "greedy-multi-cell" : "greedy", objective, budget.get(),
                  greedy.get());

  if (exhaustive) {
    ct_opt_result* raw = nullptr;
    check(ct_optimize_exhaustive(budget.get(), obj, cap, &raw), "exhaustive search");
    OptPtr ex = wrap(raw);
    emit_opt_result(csv.os(), "exhaustive", objective, budget.get(), ex.get());
  }

  if (!trace_path.empty()) {
    CsvWriter trace(trace_path, spec + " [trace]", seed);
    trace.os() << "step,value,assignment\n";
    const std::uint64_t len = ct_opt_trace_length(greedy.get());
    std::vector<int> serving(nu);
    for (std::uint64_t i = 0; i < len; ++i) {
      double value = 0.0;
      check(ct_opt_trace_entry(greedy.get(), i, serving.data(), serving.size(), &value),
            "trace entry");
      std::ostringstream assign;
      for (int k = 0; k < nu; ++k) assign << (k ? " " : "") << serving[k];
      trace.os() << i << "," << fmt(value) << ",\"" << assign.str() << "\"\n";
    }
  }
  return kExitOk;
}

// ---------------- trend ----------------

struct TrendReport {
  int checks = 0;
  int failures = 0;
  void expect(bool ok, const std::string& label) {
    ++checks;
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
  }
};

DistPtr make_form_a(int x, double y, double z) {
  ct_dist* d = nullptr;
  check(ct_dist_form_a_iid(x, y, z, &d), "form A");
  return wrap(d);
}

// Conventional X interferers vs a hybrid with the X/2 + X/2 + X/2 split, all
// at the same mean power and INR.
struct HybridPair {
  DistPtr conv, tot;
};

HybridPair matched_pair(int x, double y, double z) {
  HybridPair p{make_form_a(x, y, z), DistPtr(nullptr, &ct_dist_free)};
  const int half = x / 2;
  DistPtr eu = make_form_a(x, y, z);  // half + half cellular interferers
  DistPtr ea = make_form_a(x, y, z);
  DistPtr au = make_form_a(half, y, z);
  ct_dist* tot = nullptr;
  check(ct_dist_end_to_end(ea.get(), au.get(), eu.get(), &tot), "end-to-end");
  p.tot = wrap(tot);
  return p;
}

int run_trend(int figure, std::uint64_t samples, std::uint64_t seed, int workers,
              const std::string& out_path, const std::string& spec) {
  TrendReport report;
  const double y40db = 1e4;  // 40 dB mean power
  const double inr = 10.0;
  CsvWriter csv(out_path, spec, seed);

  switch (figure) {
    case 3: {
      // outage: conventional 24 interferers vs the 12/12/12 hybrid split
      auto pair = matched_pair(24, y40db, inr);
      csv.os() << "gamma_th,op_conv,op_hybrid,op_conv_mc,op_hybrid_mc\n";
      ct_samples* raw = nullptr;
      check(ct_simulate(pair.conv.get(), samples, seed, workers, &raw), "simulate conv");
      SamplesPtr conv_samples(raw, &ct_samples_free);
      check(ct_simulate(pair.tot.get(), samples, seed + 1, workers, &raw), "simulate hybrid");
      SamplesPtr hyb_samples(raw, &ct_samples_free);
      bool analytic_ok = true, mc_ok = true;
      const GammaGrid grid{0.1, 100.0, 20, true};
      for (double th : grid.points()) {
        double oc = 0.0, oh = 0.0;
        check(ct_outage_probability(pair.conv.get(), th, &oc), "op conv");
        check(ct_outage_probability(pair.tot.get(), th, &oh), "op hybrid");
        analytic_ok = analytic_ok && oh <= oc + 1e-12;
        double est[4], se[4];
        check(ct_estimate_metrics(conv_samples.get(), 0.5, 1.0, 1, th, est, se), "mc conv");
        const double ec = est[3], se_c = se[3];
        check(ct_estimate_metrics(hyb_samples.get(), 0.5, 1.0, 2, th, est, se), "mc hybrid");
        const double eh = est[3], se_h = se[3];
        mc_ok = mc_ok && eh <= ec + 3.0 * std::sqrt(se_c * se_c + se_h * se_h) + 1e-12;
        csv.os() << fmt(th) << "," << fmt(oc) << "," << fmt(oh) << "," << fmt(ec) << ","
                 << fmt(eh) << "\n";
      }
      report.expect(analytic_ok, "figure 3: hybrid outage <= conventional on the grid");
      report.expect(mc_ok, "figure 3: Monte Carlo agrees within 3 sigma");
      break;
    }
    case 4: {
      csv.os() << "n_interferers,mean_conv,mean_hybrid\n";
      bool ok = true;
      for (int x = 2; x <= 24; x += 2) {
        auto pair = matched_pair(x, y40db, inr);
        double mc = 0.0, mh = 0.0;
        check(ct_mean_sinr(pair.conv.get(), &mc), "mean conv");
        check(ct_mean_sinr(pair.tot.get(), &mh), "mean hybrid");
        ok = ok && mh >= mc * (1.0 - 1e-9);
        csv.os() << x << "," << fmt(mc) << "," << fmt(mh) << "\n";
      }
      report.expect(ok, "figure 4: hybrid mean SINR >= conventional across interferer counts");
      break;
    }
    case 5: {
      csv.os()
          << "n_interferers,abep_conv,abep_hybrid,cap_conv,cap_hybrid_nh2,cap_hybrid_nh1\n";
      bool abep_ok = true, cap2_ok = true, cap1_ok = true;
      for (int x = 4; x <= 24; x += 4) {
        auto pair = matched_pair(x, y40db, inr);
        double ac = 0.0, ah = 0.0, cc = 0.0, ch2 = 0.0, ch1 = 0.0;
        check(ct_abep(pair.conv.get(), 0.5, 1.0, &ac), "abep conv");
        check(ct_abep(pair.tot.get(), 0.5, 1.0, &ah), "abep hybrid");
        check(ct_ergodic_capacity(pair.conv.get(), 1, &cc), "cap conv");
        check(ct_ergodic_capacity(pair.tot.get(), 2, &ch2), "cap hybrid nh2");
        check(ct_ergodic_capacity(pair.tot.get(), 1, &ch1), "cap hybrid nh1");
        abep_ok = abep_ok && ah <= ac + 1e-12;
        cap2_ok = cap2_ok && ch2 < cc;
        cap1_ok = cap1_ok && ch1 > cc;
        csv.os() << x << "," << fmt(ac) << "," << fmt(ah) << "," << fmt(cc) << "," << fmt(ch2)
                 << "," << fmt(ch1) << "\n";
      }
      report.expect(abep_ok, "figure 5: hybrid ABEP <= conventional");
      report.expect(cap2_ok, "figure 5: one-way relayed capacity (NH=2) < conventional");
      report.expect(cap1_ok, "figure 5: NH=1 hybrid capacity > conventional");
      break;
    }
    case 6:
    case 8:
    case 10: {
      ct_gain_spec gs = ct_default_gain_spec();
      gs.seed = seed;
      if (figure == 6) {
        gs.multi_cell = 1;
        gs.n_min = 2;
        gs.n_max = 5;
        gs.m_min = gs.m_max = 2;
        gs.replications = 100;
      } else if (figure == 8) {
        gs.n_min = 2;
        gs.n_max = 5;
        gs.m_min = gs.m_max = 3;
        gs.replications = 100;
        gs.include_exhaustive = 1;
      } else {
        gs.n_min = 5;
        gs.n_max = 30;
        gs.m_min = gs.m_max = 5;
        gs.replications = 50;
      }
      std::vector<ct_gain_row> rows(200);
      std::size_t n_rows = 0;
      check(ct_gain_curve(&gs, rows.data(), rows.size(), &n_rows), "gain curve");
      csv.os() << "N,M,scheme,gain_mean,gain_ci_low,gain_ci_high,evaluations\n";
      bool gain_ok = true, order_ok = true;
      double greedy_gain = 0.0;
      for (std::size_t i = 0; i < n_rows; ++i) {
        const auto& r = rows[i];
        csv.os() << r.n_ue << "," << r.m_ap << ","
                 << (r.scheme == 0 ? "greedy" : "exhaustive") << "," << fmt(r.gain_mean) << ","
                 << fmt(r.gain_ci_low) << "," << fmt(r.gain_ci_high) << ","
                 << fmt(r.mean_evaluations) << "\n";
        gain_ok = gain_ok && r.gain_mean >= 1.0 - 1e-12;
        if (r.scheme == 0) greedy_gain = r.gain_mean;
        if (r.scheme == 1) order_ok = order_ok && r.gain_mean >= greedy_gain - 1e-12;
      }
      report.expect(gain_ok, "figure " + std::to_string(figure) +
                                 ": hybrid gain over conventional >= 1 at every point");
      if (figure == 8)
        report.expect(order_ok, "figure 8: exhaustive gain >= greedy gain pointwise");
      break;
    }
    case 11: {
      csv.os() << "instance,min_sinr_total,min_sinr_maxmin,min_sinr_conventional\n";
      bool fair_ok = true;
      for (int inst = 0; inst < 60; ++inst) {
        ct_scenario* scen = nullptr;
        check(ct_scenario_generate(4, 3, 500.0, seed + inst, nullptr, &scen), "scenario");
        ScenarioPtr sp(scen, &ct_scenario_free);
        ct_budget* braw = nullptr;
        check(ct_budget_build(sp.get(), &braw), "budget");
        BudgetPtr b(braw, &ct_budget_free);
        ct_opt_result* raw = nullptr;
        check(ct_optimize_exhaustive(b.get(), CT_OBJ_TOTAL, 100000, &raw), "total opt");
        OptPtr total = wrap(raw);
        check(ct_optimize_exhaustive(b.get(), CT_OBJ_MAXMIN, 100000, &raw), "maxmin opt");
        OptPtr maxmin = wrap(raw);
        auto min_sinr = [&](const ct_opt_result* r) {
          int serving[4];
          check(ct_opt_assignment(r, serving, 4), "assignment");
          double sinrs[4];
          check(ct_budget_ue_sinrs(b.get(), serving, sinrs), "ue sinrs");
          return *std::min_element(sinrs, sinrs + 4);
        };
        const int conv_serving[4] = {1, 1, 1, 1};  // all on the eNB
        double conv_sinrs[4];
        check(ct_budget_ue_sinrs(b.get(), conv_serving, conv_sinrs), "conv sinrs");
        const double mt = min_sinr(total.get());
        const double mm = min_sinr(maxmin.get());
        const double mc = *std::min_element(conv_sinrs, conv_sinrs + 4);
        fair_ok = fair_ok && mm >= mt - 1e-12;
        csv.os() << inst << "," << fmt(mt) << "," << fmt(mm) << "," << fmt(mc) << "\n";
      }
      report.expect(fair_ok,
                    "figure 11: maxmin-optimized minimum UE SINR >= total-optimized minimum");
      break;
    }
    default:
      fail(kExitSpec, "--figure must be one of 3, 4, 5, 6, 8, 10, 11");
  }
  std::cout << report.checks - report.failures << "/" << report.checks
            << " trend checks passed\n";
  return report.failures == 0 ? kExitOk : kExitValidation;
}

// Canonical experiment identity: the full command line minus execution-only
// parameters (worker count, output destination), which must not change any
// result bytes.
std::string rebuild_spec(int argc, char** argv) {
  std::ostringstream os;
  bool first = true;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--workers" || arg == "--out" || arg == "--trace-out") {
      ++i;  // skip its value as well
      continue;
    }
    if (arg.rfind("--workers=", 0) == 0 || arg.rfind("--out=", 0) == 0 ||
        arg.rfind("--trace-out=", 0) == 0)
      continue;
    os << (first ? "" : " ") << arg;
    first = false;
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cotether: hybrid cellular/WLAN SINR analysis toolkit"};
  app.require_subcommand(1);

  std::string budget, scenario, out_path = "-", trace_path, segment;
  std::string gamma_spec = "0.1:20:20", modulation = "dbpsk", mod_ab, objective = "total";
  std::string n_range = "2:7", m_range = "1:5";
  std::uint64_t seed = 1, samples = 1000000, cap = 10000000;
  int nh = 2, q = 2, workers = 1, figure = 3;
  int gen_ue = 0, gen_ap = 0, cells = 1, replications = 200;
  double radius = 500.0, ring = 1000.0, gamma_th = 1.0, ks_threshold = 0.005;
  bool log_grid = false, exhaustive = false, gain_mode = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");
  };

  auto* analyze = app.add_subcommand("analyze", "closed-form metric curves");
  analyze->add_option("--budget", budget, "abstract budget CSV")->required();
  analyze->add_option("--segment", segment, "restrict to one segment");
  analyze->add_option("--gamma-th", gamma_spec, "outage grid min:max:steps");
  analyze->add_flag("--log-grid", log_grid, "log-spaced outage grid");
  analyze->add_option("--modulation", modulation, "dbpsk, ncfsk or bpsk-approx");
  analyze->add_option("--mod-ab", mod_ab, "custom modulation constants A:B");
  analyze->add_option("--nh", nh, "hops for the hybrid capacity")->check(CLI::Range(1, 2));
  add_common(analyze);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates and empirical CDFs");
  simulate->add_option("--budget", budget, "abstract budget CSV")->required();
  simulate->add_option("--segment", segment, "restrict to one segment");
  simulate->add_option("--samples", samples, "Monte Carlo samples per segment");
  simulate->add_option("--workers", workers, "worker threads");
  simulate->add_option("--modulation", modulation, "modulation preset");
  simulate->add_option("--mod-ab", mod_ab, "custom modulation constants A:B");
  simulate->add_option("--nh", nh, "hops for the hybrid capacity")->check(CLI::Range(1, 2));
  simulate->add_option("--outage-th", gamma_th, "outage threshold for the estimate");
  add_common(simulate);

  auto* validate = app.add_subcommand("validate", "closed form vs Monte Carlo with pass/fail");
  validate->add_option("--budget", budget, "abstract budget CSV")->required();
  validate->add_option("--segment", segment, "restrict to one segment");
  validate->add_option("--samples", samples, "Monte Carlo samples per segment");
  validate->add_option("--workers", workers, "worker threads");
  validate->add_option("--ks-threshold", ks_threshold, "maximum allowed KS distance");
  validate->add_option("--outage-th", gamma_th, "outage threshold for the estimate");
  add_common(validate);

  auto* optimize = app.add_subcommand("optimize", "topology search and gain curves");
  optimize->add_option("--scenario", scenario, "scenario file");
  optimize->add_option("--gen-ue", gen_ue, "generate: number of UEs");
  optimize->add_option("--gen-ap", gen_ap, "generate: number of APs");
  optimize->add_option("--cells", cells, "generate: number of cells (1 = single cell)");
  optimize->add_option("--radius", radius, "cell radius in meters");
  optimize->add_option("--ring", ring, "multi-cell site ring radius in meters");
  optimize->add_option("--objective", objective, "total or maxmin");
  optimize->add_option("--q", q, "greedy initialization size Q");
  optimize->add_option("--cap", cap, "evaluation cap for exhaustive stages");
  optimize->add_flag("--exhaustive", exhaustive, "also run the exhaustive search");
  optimize->add_flag("--gain-curve", gain_mode, "averaged gain curve over random scenarios");
  optimize->add_option("--n-range", n_range, "gain curve UE range lo:hi");
  optimize->add_option("--m-range", m_range, "gain curve AP range lo:hi");
  optimize->add_option("--replications", replications, "scenarios per gain point");
  optimize->add_option("--trace-out", trace_path, "write the greedy trace CSV here");
  add_common(optimize);

  auto* trend = app.add_subcommand("trend", "scaled-down figure reproductions with checks");
  trend->add_option("--figure", figure, "3, 4, 5, 6, 8, 10 or 11")->required();
  trend->add_option("--samples", samples, "Monte Carlo samples where used");
  trend->add_option("--workers", workers, "worker threads");
  add_common(trend);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSpec;
  }

  const std::string spec = rebuild_spec(argc, argv);
  try {
    if (app.got_subcommand(analyze)) {
      const auto grid = parse_grid(gamma_spec, log_grid);
      const auto mod = resolve_modulation(modulation, mod_ab);
      return run_analyze(budget, segment, grid, mod, nh, out_path, spec, seed);
    }
    if (app.got_subcommand(simulate) || app.got_subcommand(validate)) {
      const auto mod = resolve_modulation(modulation, mod_ab);
      if (samples < 1) fail(kExitSpec, "--samples must be at least 1");
      return run_simulate(budget, segment, samples, seed, workers, mod, nh, gamma_th,
                          ks_threshold, app.got_subcommand(validate), out_path, spec);
    }
    if (app.got_subcommand(optimize))
      return run_optimize(scenario, gen_ue, gen_ap, cells, radius, ring, seed, objective, q,
                          cap, exhaustive, gain_mode, n_range, m_range, replications, out_path,
                          trace_path, spec);
    if (app.got_subcommand(trend)) return run_trend(figure, samples, seed, workers, out_path, spec);
    fail(kExitSpec, "no subcommand");
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  }
}
