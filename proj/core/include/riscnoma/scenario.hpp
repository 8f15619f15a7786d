#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "riscnoma/config.hpp"
#include "riscnoma/linalg.hpp"
#include "riscnoma/rng.hpp"

namespace riscnoma {

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

/// Propagation links of the two-stage system. The CT-stage RIS->w link
/// shares the RisToWeak parameters but is drawn from its own substream.
enum class Link : int {
  BaseToStrong = 0,
  BaseToWeak,
  BaseToRis,
  RisToStrong,
  RisToWeak,
  StrongToRis,
  StrongToWeak,
};
inline constexpr int kLinkCount = 7;
inline constexpr std::array<std::string_view, kLinkCount> kLinkKeys = {"bs", "bw", "br", "rs",
                                                                       "rw", "sr", "sw"};
std::string_view link_key(Link link);

/// One real value per link, indexable by Link.
struct PerLink {
  std::array<double, kLinkCount> values{};
  double& operator[](Link l) { return values[static_cast<int>(l)]; }
  double operator[](Link l) const { return values[static_cast<int>(l)]; }
};

struct Scenario {
  Position bs_pos{0.0, 10.0, 0.0};
  Position ris_pos{80.0, 10.0, 0.0};
  Position user_s_pos{40.0, 0.0, 0.0};
  Position user_w_pos{80.0, 0.0, 0.0};
  PerLink pathloss_exponents{{3.5, 4.0, 2.2, 3.5, 2.2, 3.5, 3.5}};
  double ref_loss_db = -30.0;
  PerLink rician_factors{{0.0, 0.0, 2.0, 0.0, 2.0, 0.0, 0.0}};
  int n_t = 4;
  int l_ris = 20;
  int bits = 5;
  double noise_power_dbm_s = -90.0;
  double noise_power_dbm_w = -90.0;
  double qos_bits_s = 1.0;
  double qos_bits_w = 2.0;
  std::uint64_t rng_seed = 1;
  // Metadata only; no implemented expression depends on these.
  double carrier_ghz = 2.5;
  double bandwidth_khz = 15.0;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;

  int levels() const { return 1 << bits; }
  double noise_s() const { return dbm_to_watts(noise_power_dbm_s); }
  double noise_w() const { return dbm_to_watts(noise_power_dbm_w); }
  Position endpoint_from(Link link) const;
  Position endpoint_to(Link link) const;
  double link_distance(Link link) const { return distance(endpoint_from(link), endpoint_to(link)); }
};

/// Builds a scenario from defaults overridden by `cfg`. Recognised keys are the
/// field names; per-link values accept a 7-item list in kLinkKeys order or
/// dotted keys such as `pathloss_exponents.sr`.
Scenario scenario_from_config(const KeyValueConfig& cfg, Scenario base = {});
std::string scenario_to_config(const Scenario& s);

struct ChannelSet {
  CVector h_bs;  // N_T
  CVector h_bw;  // N_T
  CMatrix f_br;  // L x N_T
  CVector g_rs;  // L
  CVector g_rw;  // L
  CVector f_sr;  // L
  CVector gt_rw; // L, CT-stage RIS->w
  cplx h_sw{0.0, 0.0};

  int n_t() const { return static_cast<int>(h_bs.size()); }
  int l_ris() const { return static_cast<int>(g_rs.size()); }
  /// Throws std::invalid_argument on inconsistent dimensions or non-finite entries.
  void validate() const;
  /// Same channels with every RIS-related coefficient zeroed.
  ChannelSet without_ris() const;
};

/// rho * d^-alpha with rho = 10^(ref_loss_db/10). Throws std::domain_error for d <= 0.
double path_loss(double distance_m, double exponent, double ref_loss_db);

/// Unit-modulus ULA steering vector (half-wavelength spacing, array axis = x).
CVector steering_vector(int elements, const Position& from, const Position& to);

/// sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * CN(0,1) entries. `kappa` may be +inf.
CMatrix rician_sample(int rows, int cols, double kappa, CounterRng& rng, const CMatrix& los);
/// Same with an all-ones LoS component.
CMatrix rician_sample(int rows, int cols, double kappa, CounterRng& rng);

ChannelSet generate_channels(const Scenario& scenario, const CounterRng& rng);
inline ChannelSet generate_channels(const Scenario& scenario) {
  return generate_channels(scenario, CounterRng(scenario.rng_seed));
}

}  // namespace riscnoma
