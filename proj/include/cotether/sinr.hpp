#ifndef COTETHER_SINR_HPP
#define COTETHER_SINR_HPP

#include <vector>

#include "cotether/scenario.hpp"

namespace cotether::sinr {

using net::Band;
using net::LinkBudget;
using net::NodeRef;

// The single serving point of a UE: the eNB it attaches to, or a relaying AP.
struct ServingPoint {
  enum class Kind { enb, ap } kind = Kind::enb;
  int index = 0;

  static ServingPoint enb(int e) { return {Kind::enb, e}; }
  static ServingPoint ap(int m) { return {Kind::ap, m}; }
  bool operator==(const ServingPoint&) const = default;
};

// Per-UE serving vector (the topology vector).
struct Assignment {
  std::vector<ServingPoint> serving;

  static Assignment all_nearest_enb(const LinkBudget& b);

  // 1-based id over the serving-point list: eNBs 1..E, then APs E+1..E+M.
  int display_id(const LinkBudget& b, int ue) const;
  void validate(const LinkBudget& b) const;
};

// One co-channel transmission: tx radiates toward target on a band.
struct Transmission {
  NodeRef tx;
  NodeRef target;
  Band band = Band::cellular;
};

// Interferer transmissions per receiver, split the way the SINR denominators
// need them: UE-targeted vs AP-targeted on the cellular band, plus the WLAN
// sets. A receiver's own desired link is never included.
struct InterferenceSets {
  std::vector<std::vector<Transmission>> cell_ue_at_ue, cell_ap_at_ue;
  std::vector<std::vector<Transmission>> cell_ue_at_ap, cell_ap_at_ap;
  std::vector<std::vector<Transmission>> wlan_at_ue;
};

// All co-channel transmissions implied by an assignment: one eNB->UE link per
// directly served UE, one eNB->AP feeder per active AP, one AP->UE WLAN link
// per relayed UE. Single shared cellular channel, single shared WLAN channel.
std::vector<Transmission> transmissions_of(const Assignment& a, const LinkBudget& b);

InterferenceSets derive_interference_sets(const Assignment& a, const LinkBudget& b);

// An assignment bound to its budget with the interference sets derived once.
class Topology {
 public:
  Topology(const LinkBudget& b, Assignment a);

  const LinkBudget& budget() const { return *budget_; }
  const Assignment& assignment() const { return assignment_; }
  const InterferenceSets& sets() const { return sets_; }

 private:
  const LinkBudget* budget_;
  Assignment assignment_;
  InterferenceSets sets_;
};

// One realization of the instantaneous SNR/INR of every link, exponentially
// distributed with the budget means. mean_draw() substitutes the means
// themselves, which turns every SINR below into its deterministic
// mean-budget evaluation.
class FadingDraw {
 public:
  FadingDraw(int n_enb, int n_ap, int n_ue);
  static FadingDraw mean_draw(const LinkBudget& b);

  double gain(NodeRef tx, NodeRef rx, Band band) const;
  double& slot(NodeRef tx, NodeRef rx, Band band);

  int n_enb() const { return n_enb_; }
  int n_ap() const { return n_ap_; }
  int n_ue() const { return n_ue_; }

 private:
  int n_enb_, n_ap_, n_ue_;
  std::vector<double> enb_ue_, enb_ap_, ap_ue_;
};

// Instantaneous SINRs. Denominators are 1 + sum of interferer INRs over the
// proper sets; empty sets reduce each value to the desired link's SNR.
double sinr_conventional(const FadingDraw& d, const Topology& t, int ue);
double sinr_hybrid_direct(const FadingDraw& d, const Topology& t, int ue);
double sinr_ap_phase1(const FadingDraw& d, const Topology& t, int ap);
double sinr_ue_phase2(const FadingDraw& d, const Topology& t, int ue);

// Direct-served UE: the hybrid direct SINR. AP-served UE: decode-and-forward
// min of the feeder phase and the WLAN phase.
double sinr_end_to_end(const FadingDraw& d, const Topology& t, int ue);

// Link selection between a direct and a relayed path; ties go to the direct
// link for determinism.
double sinr_selection(double direct, double relayed);

// Arithmetic mean of the per-UE end-to-end SINRs.
double overall_sinr(const FadingDraw& d, const Topology& t);

}  // namespace cotether::sinr

#endif  // COTETHER_SINR_HPP
