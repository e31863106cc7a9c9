#include "cotether/sinr.hpp"

#include <cmath>
#include <doctest.h>
#include <stdexcept>

#include "cotether/montecarlo.hpp"
#include "support/oracle.hpp"

using namespace cotether::sinr;
using cotether::net::LinkBudget;
using oracle::rel_err;

TEST_SUITE_BEGIN("sinr");

namespace {

// Single cell: 1 eNB, M APs, N UEs with simple distinct mean gains.
LinkBudget single_cell_budget(int n_ap, int n_ue) {
  std::vector<double> enb_ue, enb_ap, ap_ue;
  for (int k = 0; k < n_ue; ++k) enb_ue.push_back(100.0 + 10.0 * k);
  for (int m = 0; m < n_ap; ++m) enb_ap.push_back(200.0 + 20.0 * m);
  for (int m = 0; m < n_ap; ++m)
    for (int k = 0; k < n_ue; ++k) ap_ue.push_back(50.0 + 5.0 * m + 1.0 * k);
  return LinkBudget::from_matrices(1, n_ap, n_ue, enb_ue, enb_ap, ap_ue);
}

}  // namespace

TEST_CASE("single UE, single eNB, no APs: all interference sets empty") {
  const auto b = LinkBudget::from_matrices(1, 0, 1, {42.0}, {}, {});
  Assignment a{{ServingPoint::enb(0)}};
  const auto sets = derive_interference_sets(a, b);
  CHECK(sets.cell_ue_at_ue[0].empty());
  CHECK(sets.cell_ap_at_ue[0].empty());
  CHECK(sets.wlan_at_ue[0].empty());
  // with no interferers the SINR is the desired SNR
  const Topology t(b, a);
  const auto d = FadingDraw::mean_draw(b);
  CHECK(sinr_conventional(d, t, 0) == 42.0);
  CHECK(sinr_hybrid_direct(d, t, 0) == 42.0);
  CHECK(sinr_end_to_end(d, t, 0) == 42.0);
}

TEST_CASE("three cells, S = [2 3 1]: every UE sees exactly two cellular interferers") {
  // 3 eNBs, 3 UEs, no APs; serving vector in display form [2 3 1]
  std::vector<double> enb_ue(9, 0.0);
  for (int e = 0; e < 3; ++e)
    for (int k = 0; k < 3; ++k) enb_ue[e * 3 + k] = 10.0 + 3.0 * e + 1.0 * k;
  const auto b = LinkBudget::from_matrices(3, 0, 3, enb_ue, {}, {});
  Assignment a{{ServingPoint::enb(1), ServingPoint::enb(2), ServingPoint::enb(0)}};
  CHECK(a.display_id(b, 0) == 2);
  CHECK(a.display_id(b, 1) == 3);
  CHECK(a.display_id(b, 2) == 1);
  const auto sets = derive_interference_sets(a, b);
  for (int k = 0; k < 3; ++k) {
    CHECK(sets.cell_ue_at_ue[k].size() == 2);
    CHECK(sets.cell_ap_at_ue[k].empty());
    CHECK(sets.wlan_at_ue[k].empty());
  }
}

TEST_CASE("single-cell S = [2 1 3]: feeder and WLAN interference bookkeeping") {
  // 1 eNB, 2 APs, 3 UEs; display ids: eNB=1, AP0=2, AP1=3.
  const auto b = single_cell_budget(2, 3);
  Assignment a{{ServingPoint::ap(0), ServingPoint::enb(0), ServingPoint::ap(1)}};
  CHECK(a.display_id(b, 0) == 2);
  CHECK(a.display_id(b, 1) == 1);
  CHECK(a.display_id(b, 2) == 3);
  const auto sets = derive_interference_sets(a, b);
  // UE2 (direct) hears the two feeder transmissions, no other eNB->UE ones
  CHECK(sets.cell_ap_at_ue[1].size() == 2);
  CHECK(sets.cell_ue_at_ue[1].empty());
  // UE1's WLAN phase hears one WLAN interferer (AP1 -> UE3)
  CHECK(sets.wlan_at_ue[0].size() == 1);
  CHECK(sets.wlan_at_ue[0][0].tx.index == 1);
  // phase-1 receiver AP0: the other feeder + the direct eNB->UE2 transmission
  CHECK(sets.cell_ap_at_ap[0].size() == 1);
  CHECK(sets.cell_ue_at_ap[0].size() == 1);
}

TEST_CASE("hand arithmetic: desired 10 with interferer INRs 2 and 2 gives 2") {
  // 3 eNBs each serving its own UE; receiver UE0 takes desired 10, INR 2+2
  std::vector<double> enb_ue = {
      10.0, 7.0, 7.0,   // eNB0 row
      2.0, 20.0, 7.0,   // eNB1 row
      2.0, 7.0, 20.0,   // eNB2 row
  };
  const auto b = LinkBudget::from_matrices(3, 0, 3, enb_ue, {}, {});
  Assignment a{{ServingPoint::enb(0), ServingPoint::enb(1), ServingPoint::enb(2)}};
  const Topology t(b, a);
  const auto d = FadingDraw::mean_draw(b);
  CHECK(sinr_conventional(d, t, 0) == doctest::Approx(10.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("duplicate-formula oracle over random fading draws") {
  const auto b = single_cell_budget(2, 3);
  Assignment a{{ServingPoint::ap(0), ServingPoint::enb(0), ServingPoint::ap(1)}};
  const Topology t(b, a);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto d = cotether::mc::draw_fading(b, 99, i);
    // independent recomputation of UE1's direct SINR from raw gains
    const double desired = d.gain({NodeRef::Kind::enb, 0}, {NodeRef::Kind::ue, 1},
                                  cotether::net::Band::cellular);
    double inr = 0.0;
    for (int m = 0; m < 2; ++m)
      inr += d.gain({NodeRef::Kind::enb, 0}, {NodeRef::Kind::ue, 1},
                    cotether::net::Band::cellular);
    const double expect = desired / (1.0 + inr);
    CHECK(rel_err(sinr_hybrid_direct(d, t, 1), expect) < 1e-14);
    // relayed UE0: min of the two phases, each recomputed directly
    const double p1_desired = d.gain({NodeRef::Kind::enb, 0}, {NodeRef::Kind::ap, 0},
                                     cotether::net::Band::cellular);
    const double p1_inr =
        d.gain({NodeRef::Kind::enb, 0}, {NodeRef::Kind::ap, 0}, cotether::net::Band::cellular) +
        d.gain({NodeRef::Kind::enb, 0}, {NodeRef::Kind::ap, 0}, cotether::net::Band::cellular);
    const double p2_desired =
        d.gain({NodeRef::Kind::ap, 0}, {NodeRef::Kind::ue, 0}, cotether::net::Band::wlan);
    const double p2_inr =
        d.gain({NodeRef::Kind::ap, 1}, {NodeRef::Kind::ue, 0}, cotether::net::Band::wlan);
    const double expect_e2e =
        std::min(p1_desired / (1.0 + p1_inr), p2_desired / (1.0 + p2_inr));
    CHECK(rel_err(sinr_end_to_end(d, t, 0), expect_e2e) < 1e-14);
  }
}

TEST_CASE("selection and relay composition rules") {
  CHECK(sinr_selection(3.0, 5.0) == 5.0);
  CHECK(sinr_selection(5.0, 3.0) == 5.0);
  CHECK(sinr_selection(4.0, 4.0) == 4.0);  // tie goes to the direct value
  // AP-served UE with phase SINRs (4, 7) ends at 4
  const auto b = LinkBudget::from_matrices(1, 1, 1, {1.0}, {4.0}, {7.0});
  Assignment a{{ServingPoint::ap(0)}};
  const Topology t(b, a);
  const auto d = FadingDraw::mean_draw(b);
  CHECK(sinr_ap_phase1(d, t, 0) == 4.0);
  CHECK(sinr_ue_phase2(d, t, 0) == 7.0);
  CHECK(sinr_end_to_end(d, t, 0) == 4.0);
}

TEST_CASE("direct-served end-to-end equals the hybrid direct value") {
  const auto b = single_cell_budget(2, 3);
  Assignment a{{ServingPoint::enb(0), ServingPoint::ap(0), ServingPoint::enb(0)}};
  const Topology t(b, a);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto d = cotether::mc::draw_fading(b, 5, i);
    CHECK(sinr_end_to_end(d, t, 0) == sinr_hybrid_direct(d, t, 0));
    CHECK(sinr_end_to_end(d, t, 2) == sinr_hybrid_direct(d, t, 2));
  }
}

TEST_CASE("overall SINR is the arithmetic mean of the per-UE values") {
  const auto b = single_cell_budget(3, 4);
  Assignment a{{ServingPoint::enb(0), ServingPoint::ap(0), ServingPoint::ap(2),
                ServingPoint::enb(0)}};
  const Topology t(b, a);
  const auto d = cotether::mc::draw_fading(b, 17, 0);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += sinr_end_to_end(d, t, k);
  CHECK(rel_err(overall_sinr(d, t), s / 4.0) < 1e-15);
  // single UE: the mean is that UE's SINR
  const auto b1 = LinkBudget::from_matrices(1, 0, 1, {9.0}, {}, {});
  Assignment a1{{ServingPoint::enb(0)}};
  const Topology t1(b1, a1);
  CHECK(overall_sinr(FadingDraw::mean_draw(b1), t1) == 9.0);
}

TEST_CASE("positivity and interference monotonicity") {
  const auto b = single_cell_budget(2, 3);
  Assignment a{{ServingPoint::ap(0), ServingPoint::enb(0), ServingPoint::ap(1)}};
  const Topology t(b, a);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto d = cotether::mc::draw_fading(b, 31, i);
    for (int k = 0; k < 3; ++k) {
      const double v = sinr_end_to_end(d, t, k);
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
  }
  // adding an interferer (a second direct UE) strictly lowers UE0's SINR
  const auto b2 = LinkBudget::from_matrices(1, 0, 2, {40.0, 30.0}, {}, {});
  Assignment lone{{ServingPoint::enb(0), ServingPoint::enb(0)}};
  const Topology t2(b2, lone);
  const auto d2 = FadingDraw::mean_draw(b2);
  CHECK(sinr_hybrid_direct(d2, t2, 0) < 40.0);
}

TEST_CASE("scale property: scaling all powers approaches the interference-limited ratio") {
  const auto b = LinkBudget::from_matrices(2, 0, 2, {40.0, 10.0, 8.0, 30.0}, {}, {});
  Assignment a{{ServingPoint::enb(0), ServingPoint::enb(1)}};
  const Topology t(b, a);
  const auto base = FadingDraw::mean_draw(b);
  double prev = sinr_hybrid_direct(base, t, 0);
  const double limit = 40.0 / 8.0;  // desired over interference, noise ignored
  for (double alpha : {2.0, 8.0, 64.0, 1024.0}) {
    FadingDraw d = base;
    // scale every gain by alpha: desired and interfering powers up, noise fixed
    for (int e = 0; e < 2; ++e)
      for (int k = 0; k < 2; ++k)
        d.slot({NodeRef::Kind::enb, e}, {NodeRef::Kind::ue, k},
               cotether::net::Band::cellular) =
            alpha * base.gain({NodeRef::Kind::enb, e}, {NodeRef::Kind::ue, k},
                              cotether::net::Band::cellular);
    const double v = sinr_hybrid_direct(d, t, 0);
    CHECK(v > prev);
    CHECK(v < limit);
    prev = v;
  }
}

TEST_CASE("assignment validation") {
  const auto b = single_cell_budget(1, 2);
  Assignment bad{{ServingPoint::enb(1), ServingPoint::enb(0)}};
  CHECK_THROWS_AS(bad.validate(b), std::invalid_argument);
  Assignment bad2{{ServingPoint::ap(3), ServingPoint::enb(0)}};
  CHECK_THROWS_AS(bad2.validate(b), std::invalid_argument);
  Assignment wrong_len{{ServingPoint::enb(0)}};
  CHECK_THROWS_AS(wrong_len.validate(b), std::invalid_argument);
}

TEST_SUITE_END();
