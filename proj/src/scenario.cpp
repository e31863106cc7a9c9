#include "cotether/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cotether/montecarlo.hpp"

namespace cotether::net {

namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Placement draws also go through the counter-based streams so a scenario is
// a pure function of its seed.
Point uniform_in_disk(const Point& center, double radius, mc::RngStream& rs) {
  const double r = radius * std::sqrt(rs.next_unit());
  const double th = 2.0 * std::numbers::pi * rs.next_unit();
  return {center.x + r * std::cos(th), center.y + r * std::sin(th)};
}

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Scenario::validate() const {
  if (!(cell_radius > 0.0)) throw std::invalid_argument("scenario: cell_radius must be positive");
  if (!(radio.p_enb > 0.0) || !(radio.p_ap > 0.0))
    throw std::invalid_argument("scenario: transmit powers must be positive");
  if (!(radio.noise_power > 0.0))
    throw std::invalid_argument("scenario: noise_power must be positive");
  if (!(radio.f_cell > 0.0) || !(radio.f_wlan > 0.0) || radio.f_cell == radio.f_wlan)
    throw std::invalid_argument("scenario: bands must be positive and distinct");
  if (enb_positions.empty() && !(ap_positions.empty() && ue_positions.empty()))
    throw std::invalid_argument("scenario: APs/UEs require at least one eNB");
  const double slack = 1.0 + 1e-9;
  auto covered = [&](const Point& p) {
    for (const auto& e : enb_positions)
      if (distance(p, e) <= cell_radius * slack) return true;
    return false;
  };
  for (const auto& p : ap_positions)
    if (!covered(p)) throw std::invalid_argument("scenario: AP outside every cell disk");
  for (const auto& p : ue_positions)
    if (!covered(p)) throw std::invalid_argument("scenario: UE outside every cell disk");
}

Scenario generate_uniform(int n_ue, int m_ap, double cell_radius, std::uint64_t seed,
                          RadioParams radio) {
  if (n_ue < 0 || m_ap < 0) throw std::invalid_argument("generate_uniform: negative counts");
  if (!(cell_radius > 0.0)) throw std::invalid_argument("generate_uniform: radius must be positive");
  Scenario s;
  s.cell_radius = cell_radius;
  s.radio = radio;
  s.rng_seed = seed;
  s.enb_positions.push_back({0.0, 0.0});
  auto rs = mc::RngStream::at(seed, 0);
  for (int k = 0; k < n_ue; ++k) s.ue_positions.push_back(uniform_in_disk({0, 0}, cell_radius, rs));
  for (int m = 0; m < m_ap; ++m) s.ap_positions.push_back(uniform_in_disk({0, 0}, cell_radius, rs));
  s.validate();
  return s;
}

Scenario generate_multi_cell(int n_cells, int n_ue, int m_ap, double cell_radius,
                             double site_ring_radius, std::uint64_t seed, RadioParams radio) {
  if (n_cells < 1) throw std::invalid_argument("generate_multi_cell: need at least one cell");
  if (n_ue < 0 || m_ap < 0) throw std::invalid_argument("generate_multi_cell: negative counts");
  Scenario s;
  s.cell_radius = cell_radius;
  s.radio = radio;
  s.rng_seed = seed;
  for (int e = 0; e < n_cells; ++e) {
    const double th = 2.0 * std::numbers::pi * e / n_cells;
    s.enb_positions.push_back(n_cells == 1
                                  ? Point{0.0, 0.0}
                                  : Point{site_ring_radius * std::cos(th),
                                          site_ring_radius * std::sin(th)});
  }
  auto rs = mc::RngStream::at(seed, 0);
  auto draw_in_some_cell = [&]() {
    const int c = static_cast<int>(rs.next_u64() % static_cast<std::uint64_t>(n_cells));
    return uniform_in_disk(s.enb_positions[c], cell_radius, rs);
  };
  for (int k = 0; k < n_ue; ++k) s.ue_positions.push_back(draw_in_some_cell());
  for (int m = 0; m < m_ap; ++m) s.ap_positions.push_back(draw_in_some_cell());
  s.validate();
  return s;
}

double friis_mean_gain(double distance_m, double frequency_hz) {
  if (!(distance_m > 0.0)) throw std::domain_error("friis_mean_gain: distance must be positive");
  if (!(frequency_hz > 0.0)) throw std::domain_error("friis_mean_gain: frequency must be positive");
  const double lambda = kSpeedOfLight / frequency_hz;
  const double v = lambda / (4.0 * std::numbers::pi * distance_m);
  return v * v;
}

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  bool seen_radius = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto num = [&](const char* what) {
      double v;
      if (!(ls >> v))
        throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": expected " +
                                    what);
      return v;
    };
    if (key == "cell_radius") { s.cell_radius = num("radius"); seen_radius = true; }
    else if (key == "p_enb") s.radio.p_enb = num("power");
    else if (key == "p_ap") s.radio.p_ap = num("power");
    else if (key == "f_cell") s.radio.f_cell = num("frequency");
    else if (key == "f_wlan") s.radio.f_wlan = num("frequency");
    else if (key == "noise_power") s.radio.noise_power = num("noise power");
    else if (key == "seed") s.rng_seed = static_cast<std::uint64_t>(num("seed"));
    else if (key == "enb") { const double x = num("x"); s.enb_positions.push_back({x, num("y")}); }
    else if (key == "ap") { const double x = num("x"); s.ap_positions.push_back({x, num("y")}); }
    else if (key == "ue") { const double x = num("x"); s.ue_positions.push_back({x, num("y")}); }
    else
      throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
  }
  if (!seen_radius) throw std::invalid_argument("scenario: missing cell_radius");
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("scenario: cannot open '" + path + "'");
  return parse_scenario(f);
}

LinkBudget LinkBudget::from_matrices(int n_enb, int n_ap, int n_ue, std::vector<double> enb_ue,
                                     std::vector<double> enb_ap, std::vector<double> ap_ue) {
  if (n_enb < 0 || n_ap < 0 || n_ue < 0)
    throw std::invalid_argument("from_matrices: negative counts");
  if (enb_ue.size() != static_cast<std::size_t>(n_enb) * n_ue ||
      enb_ap.size() != static_cast<std::size_t>(n_enb) * n_ap ||
      ap_ue.size() != static_cast<std::size_t>(n_ap) * n_ue)
    throw std::invalid_argument("from_matrices: matrix sizes do not match the counts");
  for (const auto* m : {&enb_ue, &enb_ap, &ap_ue})
    for (double v : *m)
      if (!(v >= 0.0)) throw std::invalid_argument("from_matrices: entries must be >= 0");
  LinkBudget b;
  b.n_enb_ = n_enb;
  b.n_ap_ = n_ap;
  b.n_ue_ = n_ue;
  b.enb_ue_ = std::move(enb_ue);
  b.enb_ap_ = std::move(enb_ap);
  b.ap_ue_ = std::move(ap_ue);
  return b;
}

double LinkBudget::mean_snr(NodeRef tx, NodeRef rx, Band band) const {
  using K = NodeRef::Kind;
  if (tx.kind == K::enb && rx.kind == K::ue && band == Band::cellular)
    return enb_to_ue(tx.index, rx.index);
  if (tx.kind == K::enb && rx.kind == K::ap && band == Band::cellular)
    return enb_to_ap(tx.index, rx.index);
  if (tx.kind == K::ap && rx.kind == K::ue && band == Band::wlan)
    return ap_to_ue(tx.index, rx.index);
  throw std::invalid_argument("LinkBudget: no such link class");
}

int LinkBudget::nearest_enb_for_ue(int k) const {
  int best = 0;
  double best_gain = -1.0;
  for (int e = 0; e < n_enb_; ++e)
    if (enb_to_ue(e, k) > best_gain) {
      best_gain = enb_to_ue(e, k);
      best = e;
    }
  return best;
}

int LinkBudget::feeder_enb(int m) const {
  int best = 0;
  double best_gain = -1.0;
  for (int e = 0; e < n_enb_; ++e)
    if (enb_to_ap(e, m) > best_gain) {
      best_gain = enb_to_ap(e, m);
      best = e;
    }
  return best;
}

LinkBudget LinkBudget::subset_ues(const std::vector<int>& ues) const {
  for (int k : ues)
    if (k < 0 || k >= n_ue_) throw std::invalid_argument("subset_ues: UE index out of range");
  LinkBudget b;
  b.n_enb_ = n_enb_;
  b.n_ap_ = n_ap_;
  b.n_ue_ = static_cast<int>(ues.size());
  b.enb_ap_ = enb_ap_;
  b.enb_ue_.resize(static_cast<std::size_t>(n_enb_) * ues.size());
  b.ap_ue_.resize(static_cast<std::size_t>(n_ap_) * ues.size());
  for (int e = 0; e < n_enb_; ++e)
    for (std::size_t i = 0; i < ues.size(); ++i)
      b.enb_ue_[idx(e, static_cast<int>(i), b.n_ue_)] = enb_to_ue(e, ues[i]);
  for (int m = 0; m < n_ap_; ++m)
    for (std::size_t i = 0; i < ues.size(); ++i)
      b.ap_ue_[idx(m, static_cast<int>(i), b.n_ue_)] = ap_to_ue(m, ues[i]);
  return b;
}

LinkBudget build_link_budget(const Scenario& s) {
  s.validate();
  LinkBudget b;
  b.n_enb_ = static_cast<int>(s.enb_positions.size());
  b.n_ap_ = static_cast<int>(s.ap_positions.size());
  b.n_ue_ = static_cast<int>(s.ue_positions.size());
  b.enb_ue_.resize(static_cast<std::size_t>(b.n_enb_) * b.n_ue_);
  b.enb_ap_.resize(static_cast<std::size_t>(b.n_enb_) * b.n_ap_);
  b.ap_ue_.resize(static_cast<std::size_t>(b.n_ap_) * b.n_ue_);
  const double n0 = s.radio.noise_power;
  auto entry = [&](const Point& tx, const Point& rx, double p, double f) {
    const double d = distance(tx, rx);
    if (d == 0.0)
      throw std::domain_error("build_link_budget: coincident transmitter and receiver");
    return p * friis_mean_gain(d, f) / n0;
  };
  for (int e = 0; e < b.n_enb_; ++e) {
    for (int k = 0; k < b.n_ue_; ++k)
      b.enb_ue_[LinkBudget::idx(e, k, b.n_ue_)] =
          entry(s.enb_positions[e], s.ue_positions[k], s.radio.p_enb, s.radio.f_cell);
    for (int m = 0; m < b.n_ap_; ++m)
      b.enb_ap_[LinkBudget::idx(e, m, b.n_ap_)] =
          entry(s.enb_positions[e], s.ap_positions[m], s.radio.p_enb, s.radio.f_cell);
  }
  for (int m = 0; m < b.n_ap_; ++m)
    for (int k = 0; k < b.n_ue_; ++k)
      b.ap_ue_[LinkBudget::idx(m, k, b.n_ue_)] =
          entry(s.ap_positions[m], s.ue_positions[k], s.radio.p_ap, s.radio.f_wlan);
  return b;
}

AbstractBudget AbstractBudget::parse(std::istream& in) {
  AbstractBudget ab;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string segment, role, value;
    if (!std::getline(ls, segment, ',') || !std::getline(ls, role, ',') ||
        !std::getline(ls, value))
      throw std::invalid_argument("abstract budget line " + std::to_string(lineno) +
                                  ": expected segment,role,mean_snr");
    if (!header_seen && segment == "segment") { header_seen = true; continue; }
    double v;
    try {
      v = std::stod(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("abstract budget line " + std::to_string(lineno) +
                                  ": bad number '" + value + "'");
    }
    if (!(v > 0.0))
      throw std::invalid_argument("abstract budget line " + std::to_string(lineno) +
                                  ": mean values must be positive");
    std::optional<LinkSegment>* seg = nullptr;
    if (segment == "conv") seg = &ab.conv;
    else if (segment == "eu") seg = &ab.eu;
    else if (segment == "ea") seg = &ab.ea;
    else if (segment == "au") seg = &ab.au;
    else
      throw std::invalid_argument("abstract budget line " + std::to_string(lineno) +
                                  ": unknown segment '" + segment + "'");
    if (!seg->has_value()) seg->emplace();
    if (role == "desired") (*seg)->y = v;
    else if (role == "inr" || role == "inr_ue") (*seg)->z_primary.push_back(v);
    else if (role == "inr_ap") (*seg)->z_secondary.push_back(v);
    else
      throw std::invalid_argument("abstract budget line " + std::to_string(lineno) +
                                  ": unknown role '" + role + "'");
  }
  auto check = [](const std::optional<LinkSegment>& s, const char* name) {
    if (s && !(s->y > 0.0))
      throw std::invalid_argument(std::string("abstract budget: segment '") + name +
                                  "' has no desired row");
  };
  check(ab.conv, "conv");
  check(ab.eu, "eu");
  check(ab.ea, "ea");
  check(ab.au, "au");
  if (!ab.conv && !ab.eu && !ab.ea && !ab.au)
    throw std::invalid_argument("abstract budget: no segments found");
  return ab;
}

AbstractBudget AbstractBudget::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("abstract budget: cannot open '" + path + "'");
  return parse(f);
}

}  // namespace cotether::net
