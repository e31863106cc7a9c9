#include "cotether/sinr.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cotether::sinr {

namespace {

using Kind = NodeRef::Kind;

double sum_inr(const FadingDraw& d, const std::vector<Transmission>& set, NodeRef rx) {
  double s = 0.0;
  for (const auto& t : set) s += d.gain(t.tx, rx, t.band);
  return s;
}

}  // namespace

Assignment Assignment::all_nearest_enb(const LinkBudget& b) {
  Assignment a;
  a.serving.reserve(b.n_ue());
  for (int k = 0; k < b.n_ue(); ++k)
    a.serving.push_back(ServingPoint::enb(b.nearest_enb_for_ue(k)));
  return a;
}

int Assignment::display_id(const LinkBudget& b, int ue) const {
  const auto& sp = serving.at(ue);
  return sp.kind == ServingPoint::Kind::enb ? sp.index + 1 : b.n_enb() + sp.index + 1;
}

void Assignment::validate(const LinkBudget& b) const {
  if (static_cast<int>(serving.size()) != b.n_ue())
    throw std::invalid_argument("assignment: length " + std::to_string(serving.size()) +
                                " does not match " + std::to_string(b.n_ue()) + " UEs");
  for (const auto& sp : serving) {
    if (sp.kind == ServingPoint::Kind::enb) {
      if (sp.index < 0 || sp.index >= b.n_enb())
        throw std::invalid_argument("assignment: eNB index out of range");
    } else {
      if (sp.index < 0 || sp.index >= b.n_ap())
        throw std::invalid_argument("assignment: AP index out of range");
    }
  }
}

std::vector<Transmission> transmissions_of(const Assignment& a, const LinkBudget& b) {
  a.validate(b);
  std::vector<Transmission> out;
  std::vector<bool> ap_active(b.n_ap(), false);
  for (int k = 0; k < static_cast<int>(a.serving.size()); ++k) {
    const auto& sp = a.serving[k];
    if (sp.kind == ServingPoint::Kind::enb) {
      out.push_back({{Kind::enb, sp.index}, {Kind::ue, k}, Band::cellular});
    } else {
      ap_active[sp.index] = true;
      out.push_back({{Kind::ap, sp.index}, {Kind::ue, k}, Band::wlan});
    }
  }
  // One cellular feeder per active AP, from its strongest eNB.
  for (int m = 0; m < b.n_ap(); ++m)
    if (ap_active[m])
      out.push_back({{Kind::enb, b.feeder_enb(m)}, {Kind::ap, m}, Band::cellular});
  return out;
}

InterferenceSets derive_interference_sets(const Assignment& a, const LinkBudget& b) {
  const auto tx = transmissions_of(a, b);
  InterferenceSets s;
  s.cell_ue_at_ue.resize(b.n_ue());
  s.cell_ap_at_ue.resize(b.n_ue());
  s.cell_ue_at_ap.resize(b.n_ap());
  s.cell_ap_at_ap.resize(b.n_ap());
  s.wlan_at_ue.resize(b.n_ue());
  for (const auto& t : tx) {
    if (t.band == Band::cellular) {
      const bool targets_ue = t.target.kind == Kind::ue;
      for (int k = 0; k < b.n_ue(); ++k) {
        if (targets_ue && t.target.index == k) continue;  // own desired link
        (targets_ue ? s.cell_ue_at_ue : s.cell_ap_at_ue)[k].push_back(t);
      }
      for (int m = 0; m < b.n_ap(); ++m) {
        if (!targets_ue && t.target.index == m) continue;  // own feeder
        (targets_ue ? s.cell_ue_at_ap : s.cell_ap_at_ap)[m].push_back(t);
      }
    } else {
      for (int k = 0; k < b.n_ue(); ++k) {
        if (t.target.index == k) continue;
        s.wlan_at_ue[k].push_back(t);
      }
    }
  }
  return s;
}

Topology::Topology(const LinkBudget& b, Assignment a)
    : budget_(&b), assignment_(std::move(a)), sets_(derive_interference_sets(assignment_, b)) {}

FadingDraw::FadingDraw(int n_enb, int n_ap, int n_ue)
    : n_enb_(n_enb),
      n_ap_(n_ap),
      n_ue_(n_ue),
      enb_ue_(static_cast<std::size_t>(n_enb) * n_ue, 0.0),
      enb_ap_(static_cast<std::size_t>(n_enb) * n_ap, 0.0),
      ap_ue_(static_cast<std::size_t>(n_ap) * n_ue, 0.0) {}

FadingDraw FadingDraw::mean_draw(const LinkBudget& b) {
  FadingDraw d(b.n_enb(), b.n_ap(), b.n_ue());
  for (int e = 0; e < b.n_enb(); ++e) {
    for (int k = 0; k < b.n_ue(); ++k)
      d.slot({Kind::enb, e}, {Kind::ue, k}, Band::cellular) = b.enb_to_ue(e, k);
    for (int m = 0; m < b.n_ap(); ++m)
      d.slot({Kind::enb, e}, {Kind::ap, m}, Band::cellular) = b.enb_to_ap(e, m);
  }
  for (int m = 0; m < b.n_ap(); ++m)
    for (int k = 0; k < b.n_ue(); ++k)
      d.slot({Kind::ap, m}, {Kind::ue, k}, Band::wlan) = b.ap_to_ue(m, k);
  return d;
}

double& FadingDraw::slot(NodeRef tx, NodeRef rx, Band band) {
  if (tx.kind == Kind::enb && rx.kind == Kind::ue && band == Band::cellular)
    return enb_ue_[static_cast<std::size_t>(tx.index) * n_ue_ + rx.index];
  if (tx.kind == Kind::enb && rx.kind == Kind::ap && band == Band::cellular)
    return enb_ap_[static_cast<std::size_t>(tx.index) * n_ap_ + rx.index];
  if (tx.kind == Kind::ap && rx.kind == Kind::ue && band == Band::wlan)
    return ap_ue_[static_cast<std::size_t>(tx.index) * n_ue_ + rx.index];
  throw std::invalid_argument("FadingDraw: no such link class");
}

double FadingDraw::gain(NodeRef tx, NodeRef rx, Band band) const {
  if (tx.kind == Kind::enb && rx.kind == Kind::ue && band == Band::cellular)
    return enb_ue_[static_cast<std::size_t>(tx.index) * n_ue_ + rx.index];
  if (tx.kind == Kind::enb && rx.kind == Kind::ap && band == Band::cellular)
    return enb_ap_[static_cast<std::size_t>(tx.index) * n_ap_ + rx.index];
  if (tx.kind == Kind::ap && rx.kind == Kind::ue && band == Band::wlan)
    return ap_ue_[static_cast<std::size_t>(tx.index) * n_ue_ + rx.index];
  throw std::invalid_argument("FadingDraw: no such link class");
}

double sinr_conventional(const FadingDraw& d, const Topology& t, int ue) {
  const auto& sp = t.assignment().serving.at(ue);
  if (sp.kind != ServingPoint::Kind::enb)
    throw std::invalid_argument("sinr_conventional: UE is not eNB-served");
  const NodeRef rx{Kind::ue, ue};
  const double desired = d.gain({Kind::enb, sp.index}, rx, Band::cellular);
  return desired / (1.0 + sum_inr(d, t.sets().cell_ue_at_ue[ue], rx));
}

double sinr_hybrid_direct(const FadingDraw& d, const Topology& t, int ue) {
  const auto& sp = t.assignment().serving.at(ue);
  if (sp.kind != ServingPoint::Kind::enb)
    throw std::invalid_argument("sinr_hybrid_direct: UE is not eNB-served");
  const NodeRef rx{Kind::ue, ue};
  const double desired = d.gain({Kind::enb, sp.index}, rx, Band::cellular);
  return desired / (1.0 + sum_inr(d, t.sets().cell_ap_at_ue[ue], rx) +
                    sum_inr(d, t.sets().cell_ue_at_ue[ue], rx));
}

double sinr_ap_phase1(const FadingDraw& d, const Topology& t, int ap) {
  const NodeRef rx{Kind::ap, ap};
  const double desired = d.gain({Kind::enb, t.budget().feeder_enb(ap)}, rx, Band::cellular);
  return desired / (1.0 + sum_inr(d, t.sets().cell_ap_at_ap[ap], rx) +
                    sum_inr(d, t.sets().cell_ue_at_ap[ap], rx));
}

double sinr_ue_phase2(const FadingDraw& d, const Topology& t, int ue) {
  const auto& sp = t.assignment().serving.at(ue);
  if (sp.kind != ServingPoint::Kind::ap)
    throw std::invalid_argument("sinr_ue_phase2: UE is not AP-served");
  const NodeRef rx{Kind::ue, ue};
  const double desired = d.gain({Kind::ap, sp.index}, rx, Band::wlan);
  return desired / (1.0 + sum_inr(d, t.sets().wlan_at_ue[ue], rx));
}

double sinr_end_to_end(const FadingDraw& d, const Topology& t, int ue) {
  const auto& sp = t.assignment().serving.at(ue);
  if (sp.kind == ServingPoint::Kind::enb) return sinr_hybrid_direct(d, t, ue);
  // Decode-and-forward: the weaker phase limits the relayed path; ties go to
  // the first phase.
  const double phase1 = sinr_ap_phase1(d, t, sp.index);
  const double phase2 = sinr_ue_phase2(d, t, ue);
  return phase2 < phase1 ? phase2 : phase1;
}

double sinr_selection(double direct, double relayed) {
  return relayed > direct ? relayed : direct;
}

double overall_sinr(const FadingDraw& d, const Topology& t) {
  const int n = static_cast<int>(t.assignment().serving.size());
  if (n == 0) throw std::invalid_argument("overall_sinr: no UEs");
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += sinr_end_to_end(d, t, k);
  return s / n;
}

}  // namespace cotether::sinr
