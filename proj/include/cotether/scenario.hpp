#ifndef COTETHER_SCENARIO_HPP
#define COTETHER_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cotether::net {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct RadioParams {
  double p_enb = 10.0;          // W
  double p_ap = 0.1;            // W
  double f_cell = 800e6;        // Hz
  double f_wlan = 2.4e9;        // Hz
  double noise_power = 1e-10;   // W/Hz-equivalent scalar N0
};

// Node geometry plus the radio constants that turn it into mean link gains.
struct Scenario {
  std::vector<Point> enb_positions;
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  double cell_radius = 500.0;
  RadioParams radio;
  std::uint64_t rng_seed = 0;

  void validate() const;  // throws std::invalid_argument on violations
};

// Uniform-by-area placement of UEs and APs inside a single cell centered on
// one eNB at the origin. Deterministic for a given seed.
Scenario generate_uniform(int n_ue, int m_ap, double cell_radius, std::uint64_t seed,
                          RadioParams radio = {});

// Multi-cell layout: n_cells eNBs equally spaced on a ring, one disk each;
// UEs and APs uniform over the union of the disks. The inter-site geometry
// is an explicit input, not a hard-coded constant.
Scenario generate_multi_cell(int n_cells, int n_ue, int m_ap, double cell_radius,
                             double site_ring_radius, std::uint64_t seed, RadioParams radio = {});

// Plain-text key/value scenario file (see README for the format).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& in);

// Free-space mean power gain (lambda / 4 pi d)^2 with unity antenna gains.
double friis_mean_gain(double distance_m, double frequency_hz);

enum class Band { cellular, wlan };

struct NodeRef {
  enum class Kind { enb, ap, ue } kind = Kind::enb;
  int index = 0;
  bool operator==(const NodeRef&) const = default;
};

// Mean SNR/INR for every transmitter -> receiver pair the model uses:
// eNB->UE and eNB->AP on the cellular band, AP->UE on the WLAN band.
// Entries are P_tx * friis(d, f_band) / N0 (dimensionless).
class LinkBudget {
 public:
  LinkBudget() = default;

  // Direct construction from mean SNR/INR matrices (row-major: tx rows,
  // rx columns), bypassing geometry.
  static LinkBudget from_matrices(int n_enb, int n_ap, int n_ue, std::vector<double> enb_ue,
                                  std::vector<double> enb_ap, std::vector<double> ap_ue);

  int n_enb() const { return n_enb_; }
  int n_ap() const { return n_ap_; }
  int n_ue() const { return n_ue_; }

  double mean_snr(NodeRef tx, NodeRef rx, Band band) const;
  double enb_to_ue(int e, int k) const { return enb_ue_[idx(e, k, n_ue_)]; }
  double enb_to_ap(int e, int m) const { return enb_ap_[idx(e, m, n_ap_)]; }
  double ap_to_ue(int m, int k) const { return ap_ue_[idx(m, k, n_ue_)]; }

  // Strongest-mean-gain eNB for a node; with one shared band and power this
  // is the minimum-distance association.
  int nearest_enb_for_ue(int k) const;
  int feeder_enb(int m) const;

  // Budget over a subset of the UEs (in the given order), eNBs and APs
  // unchanged. Used to evaluate partial topologies where the remaining UEs
  // do not exist yet.
  LinkBudget subset_ues(const std::vector<int>& ues) const;

  friend LinkBudget build_link_budget(const Scenario& s);

 private:
  static std::size_t idx(int r, int c, int ncol) {
    return static_cast<std::size_t>(r) * ncol + c;
  }
  int n_enb_ = 0, n_ap_ = 0, n_ue_ = 0;
  std::vector<double> enb_ue_, enb_ap_, ap_ue_;
};

LinkBudget build_link_budget(const Scenario& s);

// Abstract-budget mode: mean SNR/INR values given directly per link segment,
// bypassing geometry. Segments: "conv" (single-phase cellular), "eu" (hybrid
// direct), "ea" (relay phase 1), "au" (relay phase 2).
struct LinkSegment {
  double y = 0.0;                  // desired-link mean SNR
  std::vector<double> z_primary;   // UE-targeted (or WLAN) interferer means
  std::vector<double> z_secondary; // AP-targeted interferer means (two-group forms)
};

struct AbstractBudget {
  std::optional<LinkSegment> conv, eu, ea, au;

  static AbstractBudget load(const std::string& path);
  static AbstractBudget parse(std::istream& in);
};

}  // namespace cotether::net

#endif  // COTETHER_SCENARIO_HPP
