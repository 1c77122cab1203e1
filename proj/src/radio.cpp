#include "coexsim/radio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace coexsim {

LogDistance::LogDistance(double exponent, double frequency_hz)
    : exponent_(exponent),
      reference_db_(20.0 * std::log10(4.0 * std::numbers::pi * frequency_hz / kSpeedOfLight)) {
  if (!(exponent > 0.0)) throw std::invalid_argument("path-loss exponent must be positive");
}

double LogDistance::loss_db(double distance_m) const {
  if (!(distance_m > 0.0)) {
    throw std::domain_error(
        fmt::format("path loss undefined at distance {} m (co-located radios)", distance_m));
  }
  return reference_db_ + 10.0 * exponent_ * std::log10(distance_m);
}

double LogDistance::distance_for_loss(double loss) const {
  return std::pow(10.0, (loss - reference_db_) / (10.0 * exponent_));
}

double path_loss_db(double distance_m, double exponent) {
  return LogDistance{exponent}.loss_db(distance_m);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

std::string_view to_string(Modulation m) { return m == Modulation::Cck ? "CCK" : "OQPSK"; }

RadioConfig RadioConfig::wpan(const LogDistance& propagation) {
  RadioConfig cfg;
  cfg.tx_power_dbm = 3.0;
  cfg.data_rate_bps = 250'000;
  cfg.modulation = Modulation::Oqpsk;
  cfg.nominal_range_m = 10.0;
  cfg.overhead_bytes = 6 + 11;
  cfg.preamble = SimTime{0};
  cfg.calibrate_sensitivity(propagation);
  return cfg;
}

RadioConfig RadioConfig::wlan(const LogDistance& propagation) {
  RadioConfig cfg;
  cfg.tx_power_dbm = 20.0;
  cfg.data_rate_bps = 11'000'000;
  cfg.modulation = Modulation::Cck;
  cfg.nominal_range_m = 100.0;
  cfg.overhead_bytes = 28;
  cfg.preamble = SimTime{192};
  cfg.calibrate_sensitivity(propagation);
  return cfg;
}

void RadioConfig::calibrate_sensitivity(const LogDistance& propagation) {
  rx_sensitivity_dbm = tx_power_dbm - propagation.loss_db(nominal_range_m);
}

double received_power_dbm(const RadioConfig& cfg, double distance_m,
                          const LogDistance& propagation) {
  return cfg.tx_power_dbm - propagation.loss_db(distance_m);
}

SimTime airtime(std::int64_t payload_bytes, std::int64_t overhead_bytes, std::int64_t rate_bps) {
  if (rate_bps <= 0) throw std::invalid_argument("data rate must be positive");
  const std::int64_t bits = 8 * (payload_bytes + overhead_bytes);
  const std::int64_t scaled = bits * 1'000'000;
  return SimTime{(scaled + rate_bps - 1) / rate_bps};
}

SimTime frame_airtime(const RadioConfig& cfg, int payload_bytes) {
  return cfg.preamble + airtime(payload_bytes, cfg.overhead_bytes, cfg.data_rate_bps);
}

bool overlaps_in_time(const Transmission& a, const Transmission& b) {
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Delivered: return "delivered";
    case Outcome::Corrupted: return "corrupted";
    case Outcome::NotReceived: return "not-received";
  }
  return "unknown";
}

Reception assess_reception(const Position& rx_position, const RadioConfig& rx,
                           const Transmission& tx, std::span<const Transmission> concurrent,
                           const PhyEnvironment& env) {
  Reception r;
  r.signal_dbm =
      tx.tx_power_dbm - env.propagation.loss_db(distance(rx_position, tx.tx_position));
  if (r.signal_dbm < rx.rx_sensitivity_dbm) {
    r.outcome = Outcome::NotReceived;
    r.sinr_db = -std::numeric_limits<double>::infinity();
    return r;
  }

  for (const Transmission& other : concurrent) {
    if (!overlaps_in_time(tx, other)) continue;
    const double shared = overlap_mhz(other.channel.band, tx.channel.band);
    if (shared <= 0.0) continue;
    const double weight = shared / other.channel.band.width_mhz();
    const double power_dbm =
        other.tx_power_dbm - env.propagation.loss_db(distance(rx_position, other.tx_position));
    r.interference_mw += weight * dbm_to_mw(power_dbm);
  }

  const double denominator = r.interference_mw + dbm_to_mw(env.noise_floor_dbm);
  r.sinr_db = r.signal_dbm - mw_to_dbm(denominator);
  r.outcome = r.sinr_db >= rx.sinr_threshold_db ? Outcome::Delivered : Outcome::Corrupted;
  return r;
}

Outcome frame_outcome(const Position& rx_position, const RadioConfig& rx,
                      const Transmission& tx, std::span<const Transmission> concurrent,
                      const PhyEnvironment& env) {
  return assess_reception(rx_position, rx, tx, concurrent, env).outcome;
}

Medium::Medium(PhyEnvironment env, SimTime history) : env_(env), history_(history) {}

void Medium::begin(const Transmission& tx) {
  const bool duplicate = std::any_of(active_.begin(), active_.end(), [&](const Transmission& t) {
    return t.transmitter == tx.transmitter;
  });
  if (duplicate) {
    throw std::logic_error(
        fmt::format("node {} started a transmission while already on air", tx.transmitter));
  }
  active_.push_back(tx);
}

Transmission Medium::end(EntityId transmitter, std::uint64_t frame_id, SimTime now) {
  auto it = std::find_if(active_.begin(), active_.end(), [&](const Transmission& t) {
    return t.transmitter == transmitter && t.frame.id == frame_id;
  });
  if (it == active_.end()) {
    throw std::logic_error(
        fmt::format("frame {} of node {} is not on air", frame_id, transmitter));
  }
  Transmission done = *it;
  active_.erase(it);
  finished_.push_back(done);
  while (!finished_.empty() && finished_.front().end + history_ < now) finished_.pop_front();
  return done;
}

bool Medium::busy(const Position& where, const Band& band, double threshold_dbm, SimTime now,
                  EntityId listener) const {
  for (const Transmission& t : active_) {
    if (t.transmitter == listener) continue;
    if (!(t.start <= now && now < t.end)) continue;
    if (overlap_mhz(t.channel.band, band) <= 0.0) continue;
    const double power =
        t.tx_power_dbm - env_.propagation.loss_db(distance(where, t.tx_position));
    if (power >= threshold_dbm) return true;
  }
  return false;
}

std::vector<Transmission> Medium::concurrent_with(const Transmission& tx) const {
  std::vector<Transmission> out;
  auto consider = [&](const Transmission& t) {
    const bool same = t.transmitter == tx.transmitter && t.frame.id == tx.frame.id;
    if (!same && overlaps_in_time(t, tx)) out.push_back(t);
  };
  for (const Transmission& t : finished_) consider(t);
  for (const Transmission& t : active_) consider(t);
  return out;
}

}  // namespace coexsim
