#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string_view>
#include <vector>

#include "coexsim/frame.hpp"
#include "coexsim/geometry.hpp"
#include "coexsim/sim_engine.hpp"
#include "coexsim/spectrum.hpp"

namespace coexsim {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kIsmCenterHz = 2.44e9;

/// Log-distance path loss anchored to free space at 1 m:
/// PL(d) = 20 log10(4 pi f / c) + 10 n log10(d).
class LogDistance {
 public:
  explicit LogDistance(double exponent = 2.0, double frequency_hz = kIsmCenterHz);

  double exponent() const { return exponent_; }
  double reference_loss_db() const { return reference_db_; }

  /// Throws std::domain_error for d <= 0 (co-located radios).
  double loss_db(double distance_m) const;
  /// Distance at which the loss equals `loss`.
  double distance_for_loss(double loss_db) const;

 private:
  double exponent_;
  double reference_db_;
};

double path_loss_db(double distance_m, double exponent = 2.0);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

enum class Modulation { Cck, Oqpsk };

std::string_view to_string(Modulation m);

struct RadioConfig {
  double tx_power_dbm = 0.0;
  std::int64_t data_rate_bps = 1;
  Modulation modulation = Modulation::Oqpsk;
  double rx_sensitivity_dbm = -100.0;
  double sinr_threshold_db = 10.0;
  double nominal_range_m = 10.0;
  /// MAC + PHY header bytes sent at data_rate_bps.
  int overhead_bytes = 0;
  /// Fixed-duration preamble sent ahead of the header bytes.
  SimTime preamble{0};
  /// Carrier-sense / CCA energy threshold.
  double cca_threshold_dbm = -85.0;

  /// 802.15.4 O-QPSK: 3 dBm, 250 kbps, 6 B SHR+PHR plus 11 B MAC header/FCS.
  /// Sensitivity is set so the interference-free range is 10 m.
  static RadioConfig wpan(const LogDistance& propagation = LogDistance{});
  /// 802.11b CCK: 20 dBm, 11 Mbps, 192 us long preamble, 28 B MAC overhead.
  /// Sensitivity is set so the interference-free range is 100 m.
  static RadioConfig wlan(const LogDistance& propagation = LogDistance{});

  /// Recomputes rx_sensitivity_dbm from tx power and nominal range.
  void calibrate_sensitivity(const LogDistance& propagation);

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

double received_power_dbm(const RadioConfig& cfg, double distance_m,
                          const LogDistance& propagation = LogDistance{});

/// ceil(8 (payload + overhead) / rate) in microseconds. Throws for rate <= 0.
SimTime airtime(std::int64_t payload_bytes, std::int64_t overhead_bytes,
                std::int64_t rate_bps);

/// Preamble plus header and payload bits for one frame on `cfg`.
SimTime frame_airtime(const RadioConfig& cfg, int payload_bytes);

struct Transmission {
  Frame frame;
  EntityId transmitter = 0;
  SimTime start{0};
  SimTime end{0};
  ChannelSpec channel;
  Position tx_position;
  double tx_power_dbm = 0.0;
};

/// Positive-duration overlap of two airtimes.
bool overlaps_in_time(const Transmission& a, const Transmission& b);

enum class Outcome { Delivered, Corrupted, NotReceived };

std::string_view to_string(Outcome outcome);

struct PhyEnvironment {
  LogDistance propagation{};
  double noise_floor_dbm = -100.0;
};

struct Reception {
  Outcome outcome = Outcome::NotReceived;
  double signal_dbm = 0.0;
  /// Spectrally weighted interference, linear sum.
  double interference_mw = 0.0;
  double sinr_db = 0.0;
};

/// Receiver-side verdict for `tx` against every concurrent transmission.
///
/// Interferers count only when they overlap `tx` both in time (positive
/// duration) and in spectrum; each contributes its received power scaled by
/// overlap MHz / interferer bandwidth. Powers are summed in mW.
Reception assess_reception(const Position& rx_position, const RadioConfig& rx,
                           const Transmission& tx,
                           std::span<const Transmission> concurrent,
                           const PhyEnvironment& env);

Outcome frame_outcome(const Position& rx_position, const RadioConfig& rx,
                      const Transmission& tx, std::span<const Transmission> concurrent,
                      const PhyEnvironment& env);

/// Transmissions on air, plus a short history of finished ones so the
/// receiver can see everything that overlapped a frame once it ends.
class Medium {
 public:
  explicit Medium(PhyEnvironment env = {}, SimTime history = SimTime{100'000});

  const PhyEnvironment& environment() const { return env_; }

  void begin(const Transmission& tx);
  /// Moves the transmission of frame `frame_id` from `transmitter` into
  /// history and returns it. Throws std::logic_error when not on air.
  Transmission end(EntityId transmitter, std::uint64_t frame_id, SimTime now);

  /// CCA / carrier-sense verdict at `now` for a listener at `where` tuned to
  /// `band`: any transmission with start <= now < end, other than the
  /// listener's own, with positive spectral overlap and received power at or
  /// above `threshold_dbm`.
  bool busy(const Position& where, const Band& band, double threshold_dbm,
            SimTime now, EntityId listener) const;

  /// Every transmission (on air or recently finished) overlapping `tx` in
  /// time, excluding `tx` itself.
  std::vector<Transmission> concurrent_with(const Transmission& tx) const;

  std::span<const Transmission> on_air() const { return active_; }

 private:
  PhyEnvironment env_;
  SimTime history_;
  std::vector<Transmission> active_;
  std::deque<Transmission> finished_;
};

}  // namespace coexsim
