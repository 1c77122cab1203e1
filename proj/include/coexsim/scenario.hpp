#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coexsim/geometry.hpp"
#include "coexsim/radio.hpp"
#include "coexsim/sim_engine.hpp"

namespace coexsim {

enum class Topology { Circular, Grid, Random };

std::string_view to_string(Topology topology);
/// Throws std::invalid_argument for unknown names.
Topology parse_topology(std::string_view name);

enum class Role { Rfd, Coordinator, Wlan };

std::string_view to_string(Role role);

/// Constant-bit-rate source.
struct TrafficSpec {
  int payload_bytes = 0;
  SimTime interval{1'000'000};
  SimTime start_offset{0};
  std::optional<std::size_t> max_packets;

  friend bool operator==(const TrafficSpec&, const TrafficSpec&) = default;
};

/// Generation instants offset + i * interval inside [0, duration). A zero
/// duration yields the single instant 0 when the offset is 0. Throws
/// std::invalid_argument for a non-positive interval.
std::vector<SimTime> cbr_fire_times(const TrafficSpec& spec, SimTime duration);

struct NodeSpec {
  EntityId id = 0;
  Role role = Role::Wlan;
  Position position;
  RadioConfig radio;
  bool transmitter = false;
  std::optional<EntityId> destination;
  std::optional<TrafficSpec> traffic;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct ScenarioParams {
  Bed bed;
  RadioConfig wpan_radio = RadioConfig::wpan();
  RadioConfig wlan_radio = RadioConfig::wlan();
  TrafficSpec wpan_traffic{105, SimTime{1'000'000}, SimTime{0}, std::nullopt};
  TrafficSpec wlan_traffic{1500, SimTime{1'000'000}, SimTime{0}, std::nullopt};
  int wlan_nodes = 20;
  int wlan_transmitters = 5;
  double circle_radius_m = 5.0;
  double grid_pitch_m = 2.0;
  double wpan_separation_m = 1.0;
};

/// Node 0 is the RFD end device, node 1 the FFD PAN coordinator, and nodes
/// 2.. are WLAN stations.
struct Scenario {
  Topology topology = Topology::Circular;
  std::uint64_t seed = 0;
  Bed bed;
  std::vector<NodeSpec> nodes;
  EntityId rfd = 0;
  EntityId coordinator = 1;

  std::vector<EntityId> wlan_transmitters() const;
  const NodeSpec& node(EntityId id) const { return nodes.at(id); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Coordinator at the bed center, RFD 1 m away, WLAN stations on a 5 m
/// circle at angles 2 pi i / n; transmitters evenly spaced around it.
Scenario build_circular(std::uint64_t seed, const ScenarioParams& params = {});
/// Row-major fill of a 2 m lattice from the origin. The WPAN pair takes the
/// filled lattice point nearest the bed center and its +x neighbour.
Scenario build_grid(std::uint64_t seed, const ScenarioParams& params = {});
/// WPAN pair fixed at the bed center, 1 m apart; WLAN stations uniform over
/// the bed from the seeded stream, redrawn on exact co-location.
Scenario build_random(std::uint64_t seed = 5, const ScenarioParams& params = {});

Scenario build_scenario(Topology topology, std::uint64_t seed, const ScenarioParams& params = {});

// ---------------------------------------------------------------------------
// Mobility

enum class MobilityModel { Static, RandomWaypoint };

std::string_view to_string(MobilityModel model);
MobilityModel parse_mobility(std::string_view name);

struct MobilityParams {
  double speed_mps = 10.0;
  SimTime pause{0};
  Bed bed;
};

/// Straight-line segment of a trajectory; from == to for pauses.
struct Leg {
  SimTime depart{0};
  SimTime arrive{0};
  Position from;
  Position to;
};

/// A node's trajectory, precomputed up to a horizon.
class MobilityPath {
 public:
  static MobilityPath stationary(Position where);
  /// Random waypoint: head for a uniform point in the bed at constant speed,
  /// pause, repeat. Leg durations are rounded up to whole microseconds so
  /// the realised speed never exceeds speed_mps.
  static MobilityPath random_waypoint(Position start, const MobilityParams& params,
                                      std::uint64_t key, SimTime horizon);

  MobilityModel model() const { return model_; }
  Position initial() const { return initial_; }
  std::span<const Leg> legs() const { return legs_; }

  /// Position at t >= 0; holds the last point past the horizon.
  Position position_at(SimTime t) const;
  /// Same as position_at, starting the leg search at `*cursor` and leaving
  /// the cursor on the leg that contains t. For monotone queries.
  Position position_at(SimTime t, std::size_t* cursor) const;

 private:
  MobilityModel model_ = MobilityModel::Static;
  Position initial_;
  std::vector<Leg> legs_;
};

inline Position position_at(const MobilityPath& path, SimTime t) { return path.position_at(t); }

// ---------------------------------------------------------------------------
// Scenario files

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values read from a `key = value` scenario file. Unset keys stay empty.
struct ScenarioFile {
  std::optional<std::vector<Topology>> topologies;
  std::optional<std::vector<MobilityModel>> mobility;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<double> duration_s;
  std::optional<double> wpan_interval_s;
  std::optional<double> interval_start_s;
  std::optional<double> interval_end_s;
  std::optional<double> interval_step_s;
  std::optional<double> wlan_interval_s;
  std::optional<double> wpan_phase_offset_s;
  std::optional<double> wlan_phase_offset_s;
  std::optional<int> wpan_payload_bytes;
  std::optional<int> wlan_payload_bytes;
  std::optional<double> wpan_tx_power_dbm;
  std::optional<double> wlan_tx_power_dbm;
  std::optional<int> wpan_channel;
  std::optional<int> wlan_channel;
  std::optional<double> speed_mps;
  std::optional<int> wlan_transmitters;
  std::optional<double> path_loss_exponent;
  std::optional<double> sinr_threshold_db;
  std::optional<double> noise_floor_dbm;
};

/// Recognised keys, in documentation order.
std::span<const std::string_view> scenario_file_keys();

/// Throws ConfigError (with the line number) on unknown keys, duplicate
/// keys, or malformed values.
ScenarioFile parse_scenario_file(std::istream& in, std::string_view source = "<input>");
ScenarioFile load_scenario_file(const std::string& path);

// Strict scalar parsers shared with the CLI; throw ConfigError.
double parse_number(std::string_view text, std::string_view what);
std::int64_t parse_integer(std::string_view text, std::string_view what);
std::vector<std::string_view> split_list(std::string_view text);

}  // namespace coexsim
