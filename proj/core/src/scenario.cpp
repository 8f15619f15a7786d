#include "riscnoma/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riscnoma {

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::string_view link_key(Link link) { return kLinkKeys[static_cast<int>(link)]; }

Position Scenario::endpoint_from(Link link) const {
  switch (link) {
    case Link::BaseToStrong:
    case Link::BaseToWeak:
    case Link::BaseToRis:
      return bs_pos;
    case Link::RisToStrong:
    case Link::RisToWeak:
      return ris_pos;
    case Link::StrongToRis:
    case Link::StrongToWeak:
      return user_s_pos;
  }
  return {};
}

Position Scenario::endpoint_to(Link link) const {
  switch (link) {
    case Link::BaseToStrong:
    case Link::RisToStrong:
      return user_s_pos;
    case Link::BaseToWeak:
    case Link::RisToWeak:
    case Link::StrongToWeak:
      return user_w_pos;
    case Link::BaseToRis:
    case Link::StrongToRis:
      return ris_pos;
  }
  return {};
}

void Scenario::validate() const {
  const Position named[] = {bs_pos, ris_pos, user_s_pos, user_w_pos};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!(distance(named[i], named[j]) > 0.0)) {
        throw std::invalid_argument("scenario: named positions must be distinct");
      }
    }
  }
  if (bits < 1 || bits > 16) throw std::invalid_argument("scenario: bits must be in [1, 16]");
  if (l_ris < 1) throw std::invalid_argument("scenario: l_ris must be >= 1");
  if (n_t < 1) throw std::invalid_argument("scenario: n_t must be >= 1");
  for (int l = 0; l < kLinkCount; ++l) {
    if (!(rician_factors.values[l] >= 0.0)) {
      throw std::invalid_argument("scenario: rician factor must be >= 0 for link " +
                                  std::string(kLinkKeys[l]));
    }
    if (!std::isfinite(pathloss_exponents.values[l])) {
      throw std::invalid_argument("scenario: path-loss exponent must be finite");
    }
  }
  if (!std::isfinite(ref_loss_db)) throw std::invalid_argument("scenario: ref_loss_db must be finite");
  if (!std::isfinite(noise_power_dbm_s) || !std::isfinite(noise_power_dbm_w)) {
    throw std::invalid_argument("scenario: noise power must be finite");
  }
  if (qos_bits_s < 0.0 || qos_bits_w < 0.0) {
    throw std::invalid_argument("scenario: QoS targets must be non-negative");
  }
}

namespace {

Position parse_position(const KeyValueConfig& cfg, const std::string& key, Position fallback) {
  const auto values = cfg.get_doubles(key);
  if (values.empty()) return fallback;
  if (values.size() != 3) throw ConfigError(key + ": expected x,y,z");
  return {values[0], values[1], values[2]};
}

PerLink parse_per_link(const KeyValueConfig& cfg, const std::string& key, PerLink fallback) {
  PerLink out = fallback;
  const auto values = cfg.get_doubles(key);
  if (!values.empty()) {
    if (values.size() != kLinkCount) {
      throw ConfigError(key + ": expected 7 values (bs,bw,br,rs,rw,sr,sw)");
    }
    for (int l = 0; l < kLinkCount; ++l) out.values[l] = values[l];
  }
  for (int l = 0; l < kLinkCount; ++l) {
    const std::string dotted = key + "." + std::string(kLinkKeys[l]);
    out.values[l] = cfg.get_double(dotted, out.values[l]);
  }
  return out;
}

void parse_pair(const KeyValueConfig& cfg, const std::string& key, double& s, double& w) {
  const auto values = cfg.get_doubles(key);
  if (values.size() == 1) {
    s = w = values[0];
  } else if (values.size() == 2) {
    s = values[0];
    w = values[1];
  } else if (!values.empty()) {
    throw ConfigError(key + ": expected one value or two values (s,w)");
  }
  s = cfg.get_double(key + "_s", cfg.get_double(key + ".s", s));
  w = cfg.get_double(key + "_w", cfg.get_double(key + ".w", w));
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Scenario scenario_from_config(const KeyValueConfig& cfg, Scenario base) {
  Scenario s = base;
  s.bs_pos = parse_position(cfg, "bs_pos", s.bs_pos);
  s.ris_pos = parse_position(cfg, "ris_pos", s.ris_pos);
  s.user_s_pos = parse_position(cfg, "user_s_pos", s.user_s_pos);
  s.user_w_pos = parse_position(cfg, "user_w_pos", s.user_w_pos);
  s.pathloss_exponents = parse_per_link(cfg, "pathloss_exponents", s.pathloss_exponents);
  s.rician_factors = parse_per_link(cfg, "rician_factors", s.rician_factors);
  s.ref_loss_db = cfg.get_double("ref_loss_db", s.ref_loss_db);
  s.n_t = static_cast<int>(cfg.get_int("n_t", s.n_t));
  s.l_ris = static_cast<int>(cfg.get_int("l_ris", s.l_ris));
  s.bits = static_cast<int>(cfg.get_int("bits", s.bits));
  parse_pair(cfg, "noise_power_dbm", s.noise_power_dbm_s, s.noise_power_dbm_w);
  parse_pair(cfg, "qos_bits", s.qos_bits_s, s.qos_bits_w);
  s.rng_seed = static_cast<std::uint64_t>(cfg.get_int("rng_seed", static_cast<long long>(s.rng_seed)));
  s.carrier_ghz = cfg.get_double("carrier_ghz", s.carrier_ghz);
  s.bandwidth_khz = cfg.get_double("bandwidth_khz", s.bandwidth_khz);
  s.validate();
  return s;
}

std::string scenario_to_config(const Scenario& s) {
  std::ostringstream os;
  auto pos = [&](const char* key, const Position& p) {
    os << key << " = " << fmt_double(p.x) << ", " << fmt_double(p.y) << ", " << fmt_double(p.z)
       << "\n";
  };
  auto links = [&](const char* key, const PerLink& v) {
    os << key << " = ";
    for (int l = 0; l < kLinkCount; ++l) os << (l ? ", " : "") << fmt_double(v.values[l]);
    os << "\n";
  };
  pos("bs_pos", s.bs_pos);
  pos("ris_pos", s.ris_pos);
  pos("user_s_pos", s.user_s_pos);
  pos("user_w_pos", s.user_w_pos);
  links("pathloss_exponents", s.pathloss_exponents);
  os << "ref_loss_db = " << fmt_double(s.ref_loss_db) << "\n";
  links("rician_factors", s.rician_factors);
  os << "n_t = " << s.n_t << "\n";
  os << "l_ris = " << s.l_ris << "\n";
  os << "bits = " << s.bits << "\n";
  os << "noise_power_dbm = " << fmt_double(s.noise_power_dbm_s) << ", "
     << fmt_double(s.noise_power_dbm_w) << "\n";
  os << "qos_bits = " << fmt_double(s.qos_bits_s) << ", " << fmt_double(s.qos_bits_w) << "\n";
  os << "rng_seed = " << s.rng_seed << "\n";
  os << "carrier_ghz = " << fmt_double(s.carrier_ghz) << "\n";
  os << "bandwidth_khz = " << fmt_double(s.bandwidth_khz) << "\n";
  return os.str();
}

void ChannelSet::validate() const {
  const auto n = h_bs.size();
  const auto l = g_rs.size();
  if (n < 1 || h_bw.size() != n || f_br.cols() != n) {
    throw std::invalid_argument("channels: inconsistent BS antenna dimension");
  }
  if (l < 1 || f_br.rows() != l || g_rw.size() != l || f_sr.size() != l || gt_rw.size() != l) {
    throw std::invalid_argument("channels: inconsistent RIS element dimension");
  }
  const bool finite = h_bs.allFinite() && h_bw.allFinite() && f_br.allFinite() &&
                      g_rs.allFinite() && g_rw.allFinite() && f_sr.allFinite() &&
                      gt_rw.allFinite() && std::isfinite(h_sw.real()) && std::isfinite(h_sw.imag());
  if (!finite) throw std::invalid_argument("channels: non-finite entry");
}

ChannelSet ChannelSet::without_ris() const {
  ChannelSet out = *this;
  out.f_br.setZero();
  out.g_rs.setZero();
  out.g_rw.setZero();
  out.f_sr.setZero();
  out.gt_rw.setZero();
  return out;
}

double path_loss(double distance_m, double exponent, double ref_loss_db) {
  if (!(distance_m > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  return db_to_linear(ref_loss_db) * std::pow(distance_m, -exponent);
}

CVector steering_vector(int elements, const Position& from, const Position& to) {
  const double d = distance(from, to);
  const double direction_cosine = d > 0.0 ? (to.x - from.x) / d : 0.0;
  CVector a(elements);
  for (int k = 0; k < elements; ++k) {
    a(k) = std::polar(1.0, kPi * k * direction_cosine);
  }
  return a;
}

CMatrix rician_sample(int rows, int cols, double kappa, CounterRng& rng, const CMatrix& los) {
  if (!(kappa >= 0.0)) throw std::domain_error("rician_sample: kappa must be >= 0");
  if (los.rows() != rows || los.cols() != cols) {
    throw std::invalid_argument("rician_sample: LoS component has wrong dimensions");
  }
  double los_weight = 0.0;
  double nlos_weight = 1.0;
  if (std::isinf(kappa)) {
    los_weight = 1.0;
    nlos_weight = 0.0;
  } else {
    los_weight = std::sqrt(kappa / (1.0 + kappa));
    nlos_weight = std::sqrt(1.0 / (1.0 + kappa));
  }
  CMatrix out(rows, cols);
  // column-major draw order keeps the stream layout independent of kappa
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const cplx nlos = rng.complex_normal();
      out(r, c) = los_weight * los(r, c) + nlos_weight * nlos;
    }
  }
  return out;
}

CMatrix rician_sample(int rows, int cols, double kappa, CounterRng& rng) {
  return rician_sample(rows, cols, kappa, rng, CMatrix::Ones(rows, cols));
}

namespace {

CMatrix draw_link(const Scenario& sc, Link link, const CounterRng& root, std::string_view stream,
                  const CMatrix& los) {
  CounterRng sub = root.substream(stream);
  const double gain = path_loss(sc.link_distance(link), sc.pathloss_exponents[link], sc.ref_loss_db);
  return std::sqrt(gain) *
         rician_sample(static_cast<int>(los.rows()), static_cast<int>(los.cols()),
                       sc.rician_factors[link], sub, los);
}

}  // namespace

ChannelSet generate_channels(const Scenario& sc, const CounterRng& rng) {
  sc.validate();
  const int n = sc.n_t;
  const int l = sc.l_ris;
  ChannelSet ch;
  ch.h_bs = draw_link(sc, Link::BaseToStrong, rng, "bs",
                      steering_vector(n, sc.bs_pos, sc.user_s_pos))
                .col(0);
  ch.h_bw = draw_link(sc, Link::BaseToWeak, rng, "bw",
                      steering_vector(n, sc.bs_pos, sc.user_w_pos))
                .col(0);
  const CMatrix br_los = steering_vector(l, sc.ris_pos, sc.bs_pos) *
                         steering_vector(n, sc.bs_pos, sc.ris_pos).adjoint();
  ch.f_br = draw_link(sc, Link::BaseToRis, rng, "br", br_los);
  ch.g_rs = draw_link(sc, Link::RisToStrong, rng, "rs",
                      steering_vector(l, sc.ris_pos, sc.user_s_pos))
                .col(0);
  const CVector rw_los = steering_vector(l, sc.ris_pos, sc.user_w_pos);
  ch.g_rw = draw_link(sc, Link::RisToWeak, rng, "rw", rw_los).col(0);
  ch.gt_rw = draw_link(sc, Link::RisToWeak, rng, "rw_ct", rw_los).col(0);
  ch.f_sr = draw_link(sc, Link::StrongToRis, rng, "sr",
                      steering_vector(l, sc.ris_pos, sc.user_s_pos))
                .col(0);
  ch.h_sw = draw_link(sc, Link::StrongToWeak, rng, "sw", CMatrix::Ones(1, 1))(0, 0);
  return ch;
}

}  // namespace riscnoma
