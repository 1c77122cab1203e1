#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coexsim/csma_lrwpan.hpp"
#include "coexsim/dcf_wlan.hpp"
#include "coexsim/metrics.hpp"
#include "coexsim/scenario.hpp"
#include "coexsim/sim_engine.hpp"

namespace coexsim {

/// Everything one simulation run needs. Defaults reproduce the reference
/// setup: 100 s, 105 B WPAN frames at 3 dBm, five 1500 B / 1 s WLAN sources
/// at 20 dBm, WLAN channel 1 over WPAN channel 3, both CBR sources in phase.
struct SimulationConfig {
  Topology topology = Topology::Circular;
  MobilityModel mobility = MobilityModel::Static;
  std::uint64_t seed = 5;
  SimTime duration{100'000'000};

  SimTime wpan_interval{1'000'000};
  SimTime wlan_interval{1'000'000};
  SimTime wpan_phase_offset{0};
  SimTime wlan_phase_offset{0};
  std::optional<std::size_t> wpan_max_packets;
  int wpan_payload_bytes = 105;
  int wlan_payload_bytes = 1500;

  double wpan_tx_power_dbm = 3.0;
  double wlan_tx_power_dbm = 20.0;
  int wpan_channel = 3;
  int wlan_channel = 1;
  int wlan_transmitters = 5;

  double speed_mps = 10.0;
  SimTime pause{0};

  double path_loss_exponent = 2.0;
  double noise_floor_dbm = -100.0;
  double sinr_threshold_db = 10.0;
  double wpan_cca_threshold_dbm = -85.0;
  double wlan_cca_threshold_dbm = -85.0;

  CsmaParams csma;
  DcfParams dcf;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
  ScenarioParams scenario_params() const;
};

struct WlanStats {
  std::uint64_t frames_generated = 0;
  std::uint64_t attempts = 0;
  std::uint64_t delivered = 0;
  std::uint64_t retry_drops = 0;
  std::uint64_t queue_drops = 0;
  /// Summed airtime of every WLAN attempt that finished inside the run.
  SimTime airtime{0};
};

struct RunResult {
  MetricsSummary metrics;
  std::vector<RxRecord> receptions;
  WlanStats wlan;
  std::uint64_t events = 0;
  SimTime final_clock{0};
};

/// Builds the configured topology and runs it to cfg.duration.
RunResult run_simulation(const SimulationConfig& cfg);
/// Runs a pre-built scenario; topology/seed in cfg only seed the streams.
RunResult run_simulation(const SimulationConfig& cfg, const Scenario& scenario);

}  // namespace coexsim
